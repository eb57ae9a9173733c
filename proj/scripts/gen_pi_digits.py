#!/usr/bin/env python3
"""Regenerate src/pi_digits.cpp: the first 10000 decimal digits of pi.

Digits are computed twice (mpmath and an integer Machin formula) and must agree.
"""
import sys
import pathlib

import mpmath

COUNT = 10000


def arctan_inv(x, unity):
    total = term = unity // x
    x2 = x * x
    n = 3
    sign = -1
    while term:
        term //= x2
        total += sign * (term // n)
        sign = -sign
        n += 2
    return total


def main():
    sys.set_int_max_str_digits(COUNT * 10)
    mpmath.mp.dps = COUNT + 50
    a = mpmath.nstr(mpmath.pi, COUNT + 40, strip_zeros=False).split(".")[1][:COUNT]
    unity = 10 ** (COUNT + 20)
    b = str(4 * (4 * arctan_inv(5, unity) - arctan_inv(239, unity)))[1 : COUNT + 1]
    if a != b:
        sys.exit("digit routes disagree")
    lines = [a[i : i + 100] for i in range(0, COUNT, 100)]
    body = "\n".join(f'    "{line}"' for line in lines)
    out = pathlib.Path(__file__).resolve().parent.parent / "src" / "pi_digits.cpp"
    out.write_text(
        "// Generated by scripts/gen_pi_digits.py. Do not edit.\n\n"
        '#include "rmm/pi_digits.hpp"\n\n'
        "namespace rmm {\n\n"
        "namespace {\n"
        f"constexpr char kDigits[] =\n{body};\n"
        "}  // namespace\n\n"
        "std::string_view pi_decimal_digits() {\n"
        "  return {kDigits, sizeof(kDigits) - 1};\n"
        "}\n\n"
        "}  // namespace rmm\n"
    )


if __name__ == "__main__":
    main()
