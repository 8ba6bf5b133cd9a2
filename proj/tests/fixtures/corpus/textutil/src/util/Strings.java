package util;

public class Strings {
    public static boolean isBlank(String s) {
        return s == null || s.trim().isEmpty();
    }

    public static String repeat(String unit, int n) {
        String out = "";
        int i = 0;
        while (i < n) {
            out = out + unit;
            i = i + 1;
        }
        return out;
    }

    public static String padRight(String s, int width, char fill) {
        String r = s;
        while (r.length() < width) {
            r = r + fill;
        }
        return r;
    }

    public static String center(String s, int width) {
        int left = (width - s.length()) / 2;
        return repeat(" ", left) + s + repeat(" ", width - left - s.length());
    }
}
