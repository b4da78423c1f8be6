def reverse(s):
    out = []
    for i in range(len(s) - 1, -1, -1):
        out.append(s[i])
    return "".join(out)


def vowels(s):
    n = 0
    for c in s:
        if c in "aeiou":
            n += 1
    return n


def palindrome(s):
    i = 0
    j = len(s) - 1
    while i < j:
        if s[i] != s[j]:
            return False
        i += 1
        j -= 1
    return True


print(reverse("transform"))
print(vowels("semantic preserving"))
print(palindrome("racecar"))
print(palindrome("robust"))
