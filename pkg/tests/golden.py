"""Published reference values: the 5x5 kernel block and the N <= 11 probability table."""

from fractions import Fraction

# (numerator, power of two in the denominator); every entry multiplies pi^2
KERNEL_5X5 = [
    [(1, 2), (39, 7), (10335, 13), (2997855, 18), (6149253915, 25)],
    [(3, 7), (435, 13), (72555, 18), (91686735, 25), (48462643845, 30)],
    [(135, 13), (16695, 18), (15107715, 25), (5645015145, 30), (6504362819955, 36)],
    [(7875, 18), (6024375, 25), (1840070925, 30), (1683904397175, 36), (1105018317277875, 41)],
    [(3472875, 25), (955040625, 30), (768670177275, 36), (432899597505375, 41),
     (2645687420488987875, 49)],
]


def kernel_entry(j: int, k: int) -> Fraction:
    num, e = KERNEL_5X5[j - 1][k - 1]
    return Fraction(num, 2**e)


# N: (numerator, power of two in the denominator, power of pi, printed value, printed ratio)
TABLE_1 = {
    1: (1, 0, 0, "1", None),
    2: (1, 2, 1, "7.85398e-01", "1.01321"),
    3: (5, 5, 1, "4.90874e-01", "1.00500"),
    4: (201, 13, 2, "2.42162e-01", "1.00446"),
    5: (10013, 20, 2, "9.42462e-02", "1.00257"),
    6: (64011585, 36, 3, "2.88821e-02", "1.00229"),
    7: (31625532537, 47, 3, "6.96751e-03", "1.00156"),
    8: (8012440011007425, 69, 4, "1.32219e-03", "1.00142"),
    9: (39186641315011126281, 84, 4, "1.97341e-04", "1.00106"),
    10: (6286653393344610981261954345, 116, 5, "2.31574e-05", "1.00098"),
    11: (304070790487188921741594082108725, 135, 5, "2.13636e-06", "1.00077"),
}
