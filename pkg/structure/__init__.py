from structure.fixing import fixing_box_robustness, min_fixing_number
from structure.representation import represent_discrete
from structure.robustness import matching_lower_bound, offdiag_robustness
