"""Logic over finite sets of models: two turnstiles, constant choice, perspectives."""

from msl.evaluator import Evaluator, Verdict, eval_neg, eval_pos, eval_variant_singleton, evaluate
from msl.fo import eval_fo
from msl.models import Interpretation, ModelSet, Structure, common_domain
from msl.parser import parse
from msl.perspectives import Perspective, filter_implies, persp_eval, persp_eval_signed, restrict
from msl.printer import to_text
from msl.syntax import Fragment, classify, rank
from msl.translate import bounded_fo_sat, bounded_lc_sat, check_translation_claim, translate

__all__ = [
    "Evaluator",
    "Fragment",
    "Interpretation",
    "ModelSet",
    "Perspective",
    "Structure",
    "Verdict",
    "bounded_fo_sat",
    "bounded_lc_sat",
    "check_translation_claim",
    "classify",
    "common_domain",
    "eval_fo",
    "eval_neg",
    "eval_pos",
    "eval_variant_singleton",
    "evaluate",
    "filter_implies",
    "parse",
    "persp_eval",
    "persp_eval_signed",
    "rank",
    "restrict",
    "to_text",
    "translate",
]
