package text;

import util.Strings;

public class Words {
    private String text;
    private int limit;

    public Words(String text, int limit) {
        this.text = text;
        this.limit = limit;
    }

    public int countSpaces() {
        int n = 0;
        for (int i = 0; i < text.length(); i++) {
            if (text.charAt(i) == ' ') {
                n++;
            }
        }
        return n;
    }

    public int wordCount() {
        if (Strings.isBlank(text)) {
            return 0;
        }
        return countSpaces() + 1;
    }

    public String shorten() {
        String t = text;
        if (t.length() > limit) {
            t = t.substring(0, limit) + "...";
        }
        return Strings.padRight(t, limit, '.');
    }

    public String banner(String title) {
        Counter c = new Counter();
        c.add(title.length());
        c.add(wordCount());
        return Strings.repeat("=", c.total()) + "\n" + title;
    }
}
