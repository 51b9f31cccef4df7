import re
from fractions import Fraction
from typing import Tuple

FRACTION_PATTERN = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$')


class ValidationUtils:
    @staticmethod
    def validate_fraction(text: str) -> Tuple[bool, str]:
        """Validate an exact rational written as "p/q" or "p" """
        if text is None or str(text).strip() == '':
            return False, "Value is required"

        match = FRACTION_PATTERN.match(str(text))
        if not match:
            return False, f"Malformed fraction {text!r}: expected p/q with integers p, q"

        if match.group(2) is not None and int(match.group(2)) == 0:
            return False, f"Malformed fraction {text!r}: zero denominator"

        return True, ""

    @staticmethod
    def validate_jordan_parameter(kind: str, b: int) -> Tuple[bool, str]:
        """Validate the off-diagonal entry b of the second block"""
        if kind == '1' and b not in (-1, 0, 1):
            return False, "Case 1 requires b in {-1, 0, 1}"

        if kind == '3' and b not in (0, 1):
            return False, "Case 3 requires b in {0, 1}"

        return True, ""

    @staticmethod
    def validate_rotation(turn: Fraction) -> Tuple[bool, str]:
        """Validate theta/pi for a Case 2 rotation"""
        if not 0 < turn < 2:
            return False, f"Case 2 requires 0 < theta/pi < 2, got {turn}"

        if turn == 1:
            return False, "Case 2 excludes theta = pi"

        return True, ""

    @staticmethod
    def validate_i1_parity(kind: str, i1: int) -> Tuple[bool, str]:
        """Validate the parity of i(y,1) against the normal-form case"""
        if kind in ('1', '2', '3') and i1 % 2 != 0:
            return False, f"Case {kind} requires even i1"

        if kind == '4' and i1 % 2 == 0:
            return False, "Case 4 requires odd i1"

        return True, ""
