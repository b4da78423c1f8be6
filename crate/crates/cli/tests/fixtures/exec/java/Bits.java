public class Main {
    static int popcount(int x) {
        int n = 0;
        while (x != 0) {
            n += x & 1;
            x >>>= 1;
        }
        return n;
    }

    static boolean powerOfTwo(int x) {
        return x > 0 && (x & (x - 1)) == 0;
    }

    static int clamp(int v, int lo, int hi) {
        if (v < lo) {
            return lo;
        }
        if (v > hi) {
            return hi;
        }
        return v;
    }

    public static void main(String[] args) {
        System.out.println(popcount(255));
        System.out.println(popcount(1024));
        System.out.println(powerOfTwo(64));
        System.out.println(powerOfTwo(96));
        System.out.println(clamp(-5, 0, 10));
        System.out.println(clamp(50, 0, 10));
        System.out.println(clamp(7, 0, 10));
    }
}
