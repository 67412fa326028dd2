"""jstdiff: joint surrogate trees for differencing two black-box classifiers.

Given a tabular dataset and the predictions of two classifiers on it, this
package fits two conjoined decision-tree surrogates that share split
conditions until a divergence criterion fires, extracts an interpretable
ruleset describing where the surrogates disagree, optionally refines it for
precision, and evaluates prediction quality and interpretability metrics.
"""

from ._split_backend import BACKEND
from .baselines import direct_dt_rules, separate_rules
from .diffrules import (
    DiffRule,
    DiffRuleset,
    Predicate,
    count_rules_and_predicates,
    extract,
    intersect,
    rule_satisfied,
    ruleset_predict,
)
from .dtree import (
    DecisionTree,
    PathCondition,
    SplitCondition,
    best_split,
    entropy,
    feature_importance,
    fit,
    path_condition,
    predict,
    predict_batch,
    split_objective,
)
from .jst import (
    JointSurrogateTree,
    build,
    export_dot,
    joint_best_split,
    restrict,
    should_diverge,
    surrogate_predict,
    surrogate_predict_batch,
)
from .metrics import MetricsReport, evaluate, fidelity
from .refine import RefinementReport, refine, refine_once
from .tabular import (
    Dataset,
    LabelVector,
    SplitSpec,
    load_csv,
    preprocess,
    preprocess_labeled,
    split,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Dataset",
    "DecisionTree",
    "DiffRule",
    "DiffRuleset",
    "JointSurrogateTree",
    "LabelVector",
    "MetricsReport",
    "PathCondition",
    "Predicate",
    "RefinementReport",
    "SplitCondition",
    "SplitSpec",
    "best_split",
    "build",
    "count_rules_and_predicates",
    "direct_dt_rules",
    "entropy",
    "evaluate",
    "export_dot",
    "extract",
    "feature_importance",
    "fidelity",
    "fit",
    "intersect",
    "joint_best_split",
    "load_csv",
    "path_condition",
    "predict",
    "predict_batch",
    "preprocess",
    "preprocess_labeled",
    "refine",
    "refine_once",
    "restrict",
    "rule_satisfied",
    "ruleset_predict",
    "separate_rules",
    "should_diverge",
    "split",
    "split_objective",
    "surrogate_predict",
    "surrogate_predict_batch",
    "__version__",
]
