"""pymodels: benchmark adapter feeding jstdiff with model predictions."""

from .datasets import REGISTRY, DatasetNotFound, dataset_available, load_dataset
from .export import TooFewModels, select_pairs, train_and_export
from .zoo import ABBREVIATIONS, UnknownAbbreviation, make_model

__version__ = "0.1.0"

__all__ = [
    "ABBREVIATIONS",
    "REGISTRY",
    "DatasetNotFound",
    "TooFewModels",
    "UnknownAbbreviation",
    "dataset_available",
    "load_dataset",
    "make_model",
    "select_pairs",
    "train_and_export",
    "__version__",
]
