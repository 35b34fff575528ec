from bounds.formulas import BOUNDS as FORMULAS
from bounds.logbound import LogBound, exact_le_bound
from bounds.recursion import closed_form, main_bound, unrolled_recursion

BOUNDS = dict(FORMULAS)
BOUNDS.update({
    "closed_form": (closed_form, ("k", "l", "s")),
    "unrolled_recursion": (unrolled_recursion, ("k", "l", "s")),
    "main_bound": (main_bound, ("s",)),
})
