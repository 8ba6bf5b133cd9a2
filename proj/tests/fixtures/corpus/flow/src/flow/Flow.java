package flow;

public class Flow {
    private int acc;

    public int swap(int a, int b) {
        int t = a;
        a = b;
        b = t;
        return a - b;
    }

    public int branch(int x) {
        int y = 0;
        if (x > 10) {
            y = x - 10;
        } else {
            y = x + 10;
        }
        return y * x;
    }

    public int shortCircuit(int a, int b) {
        int r = a;
        if (a > 0 && b > a) {
            r = b;
        }
        return r + a;
    }

    public int early(int x) {
        if (x < 0) {
            return 0;
        }
        int y = x * 2;
        return y;
    }

    public int pick(boolean f, int a, int b) {
        int r = f ? a : b;
        return r;
    }

    public void accumulate(int v) {
        acc += v;
        this.acc = acc * 2;
    }

    public int total(int[] xs) {
        int s = 0;
        for (int i = 0; i < xs.length; i++) {
            s = s + xs[i];
        }
        return s;
    }

    public int collatz(int n) {
        int steps = 0;
        while (n != 1) {
            if (n % 2 == 0) {
                n = n / 2;
            } else {
                n = 3 * n + 1;
            }
            steps = steps + 1;
        }
        return steps;
    }

    public int fib(int n) {
        int a = 0;
        int b = 1;
        int i = 0;
        while (i < n) {
            int t = a + b;
            a = b;
            b = t;
            i++;
        }
        return a;
    }
}
