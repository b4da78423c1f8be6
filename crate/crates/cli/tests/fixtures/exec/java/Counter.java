public class Main {
    static int calls = 0;

    static int tick(int by) {
        calls += by;
        return calls;
    }

    static int classify(int a, int b) {
        int kind;
        if (a == b) {
            kind = 0;
        } else if (a < b) {
            kind = 1;
        } else {
            kind = 2;
        }
        return kind;
    }

    public static void main(String[] args) {
        for (int i = 0; i < 5; i++) tick(i);
        System.out.println(calls);
        System.out.println(classify(1, 1));
        System.out.println(classify(1, 2));
        System.out.println(classify(3, 2));
        int x = 10;
        x -= 3;
        x *= 2;
        x++;
        System.out.println(x);
    }
}
