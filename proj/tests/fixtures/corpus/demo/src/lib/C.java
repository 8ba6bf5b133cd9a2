package lib;

public class C {
    public static String fmt(int v) {
        return pad("" + v, 4);
    }

    static String pad(String s, int width) {
        String r = s;
        while (r.length() < width) {
            r = " " + r;
        }
        return r;
    }
}
