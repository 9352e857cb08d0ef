"""Touch-trace verification: features, warped distances, templates, selection."""

from .dtw import DtwResult, banded_dtw, dtw_distance
from .features import (FEATURE_NAMES, MOTION_NAMES, STYLO_NAMES, SYM_FEATURES,
                       TOUCH_NAMES, FeatureSet, extract_features)
from .selection import (Z_MAX, Z_STEP, SelectionPair, ZListEntry, get_z_list,
                        select_features, z_grid)
from .symbols import COMPLEX_WORDS, EASY_WORDS, SymbolSet, default_symbols
from .template import (Decision, Template, TemplateBank, build_template,
                       classify, multi_dtw)
from .trace import (TouchEvent, Trace, parse_trace, render_header,
                    trace_to_jsonl)

__all__ = [
    "DtwResult", "banded_dtw", "dtw_distance",
    "FEATURE_NAMES", "MOTION_NAMES", "STYLO_NAMES", "SYM_FEATURES",
    "TOUCH_NAMES", "FeatureSet", "extract_features",
    "Z_MAX", "Z_STEP", "SelectionPair", "ZListEntry", "get_z_list",
    "select_features", "z_grid",
    "COMPLEX_WORDS", "EASY_WORDS", "SymbolSet", "default_symbols",
    "Decision", "Template", "TemplateBank", "build_template", "classify",
    "multi_dtw",
    "TouchEvent", "Trace", "parse_trace", "render_header", "trace_to_jsonl",
]
