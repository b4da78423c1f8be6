public class Main {
    static int[][] multiply(int[][] a, int[][] b) {
        int n = a.length, m = b[0].length, k = b.length;
        int[][] c = new int[n][m];
        for (int i = 0; i < n; i++) {
            for (int j = 0; j < m; j++) {
                int s = 0;
                for (int t = 0; t < k; t++) {
                    s += a[i][t] * b[t][j];
                }
                c[i][j] = s;
            }
        }
        return c;
    }

    static int trace(int[][] a) {
        int tr = 0;
        for (int i = 0; i < a.length; i++) tr += a[i][i];
        return tr;
    }

    public static void main(String[] args) {
        int[][] a = {{1, 2}, {3, 4}};
        int[][] b = {{5, 6}, {7, 8}};
        int[][] c = multiply(a, b);
        for (int i = 0; i < 2; i++) {
            System.out.println(c[i][0] + " " + c[i][1]);
        }
        System.out.println(trace(c));
    }
}
