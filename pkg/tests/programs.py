"""Shared program sources for tests, with hand-derived expectations.

LISTING1 is the walkthrough buggy max-of-3 program. Line layout matters:
the three if-conditions sit on lines 5, 8, 11, the scanf reads on line
4, and the prints on lines 7, 10, 13. The TABLE1 suite is (1,2,3)->3,
(6,2,1)->6, (-1,3,1)->3; all three tests fail.

Hand traces of LISTING1 (W=16):
  t0 f=1 s=2 t=3: c1: 1<2 && 1>=3 false; c2: 1>2 false; c3: 1>3 false
      -> output ()
  t1 f=6 s=2 t=1: c1: 6<2 false; c2: 6>2 && 2<=1 false; c3: 6>1 && 2>1
      -> prints t=1 -> output (1)
  t2 f=-1 s=3 t=1: c1: -1<3 && -1>=1 false; c2: -1>3 false; c3: -1>1
      false -> output ()
"""

LISTING1 = """int main() {
    // finds maximum of 3 numbers
    int f, s, t;
    scanf("%d %d %d", &f, &s, &t);
    if (f < s && f >= t)
        // fix: f >= s
        printf("%d\\n", f);
    if (f > s && s <= t)
        // fix: f < s and s >= t
        printf("%d\\n", s);
    if (f > t && s > t)
        // fix: f < t and s < t
        printf("%d\\n", t);
    return 0;
}
"""

LISTING1_FIXED = """int main() {
    int f, s, t;
    scanf("%d %d %d", &f, &s, &t);
    if (f >= s && f >= t)
        printf("%d\\n", f);
    if (f < s && s >= t)
        printf("%d\\n", s);
    if (f < t && s < t)
        printf("%d\\n", t);
    return 0;
}
"""

TABLE1 = [
    ("t0", (1, 2, 3), (3,)),
    ("t1", (6, 2, 1), (6,)),
    ("t2", (-1, 3, 1), (3,)),
]

# sum of 1..n, with the paper-shaped for loop
SUM_CORRECT = """int main() {
    int n, s, i;
    s = 0;
    scanf("%d", &n);
    if (n == 0)
        printf("%d\\n", 0);
    else {
        for (i = 1; i <= n; i++)
            s = s + i;
        printf("%d\\n", s);
    }
    return 0;
}
"""


def write_suite(path, cases):
    """Materialize [(test_id, inputs, expected), ...] as tN.in/tN.out files."""
    path.mkdir(parents=True, exist_ok=True)
    for test_id, inputs, expected in cases:
        (path / f"{test_id}.in").write_text(
            " ".join(str(v) for v in inputs) + "\n")
        (path / f"{test_id}.out").write_text(
            "\n".join(str(v) for v in expected) + ("\n" if expected else ""))
    return path
