class Counter:
    def __init__(self):
        self.calls = 0

    def tick(self, by):
        self.calls += by
        return self.calls


def classify(a, b):
    if a == b:
        kind = 0
    elif a < b:
        kind = 1
    else:
        kind = 2
    return kind


c = Counter()
for i in range(5):
    c.tick(i)
print(c.calls)
print(classify(1, 1), classify(1, 2), classify(3, 2))
x = 10
x -= 3
x *= 2
print(x)
