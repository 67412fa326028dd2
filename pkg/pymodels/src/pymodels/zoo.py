"""The model zoo: abbreviation -> scikit-learn constructor.

Constructor parameters are fixed; empty parameter lists mean library
defaults. Models are used strictly as black boxes afterwards (predict only).
"""

from __future__ import annotations

from sklearn.ensemble import GradientBoostingClassifier, RandomForestClassifier
from sklearn.linear_model import LogisticRegression
from sklearn.naive_bayes import GaussianNB
from sklearn.neighbors import KNeighborsClassifier
from sklearn.neural_network import MLPClassifier
from sklearn.tree import DecisionTreeClassifier


class UnknownAbbreviation(KeyError):
    pass


_ZOO = {
    "LR": lambda: LogisticRegression(random_state=1234),
    "KN1": lambda: KNeighborsClassifier(n_neighbors=3),
    "KN2": lambda: KNeighborsClassifier(),
    "MLP1": lambda: MLPClassifier(
        alpha=1e-05, hidden_layer_sizes=(15,), random_state=1234, solver="lbfgs"
    ),
    "MLP2": lambda: MLPClassifier(
        hidden_layer_sizes=(100, 100), random_state=1234
    ),
    "DT1": lambda: DecisionTreeClassifier(max_depth=5),
    "DT2": lambda: DecisionTreeClassifier(max_depth=10),
    "GB": lambda: GradientBoostingClassifier(),
    "RF1": lambda: RandomForestClassifier(),
    "RF2": lambda: RandomForestClassifier(max_depth=6, random_state=1234),
    "GNB": lambda: GaussianNB(),
}

ABBREVIATIONS = tuple(sorted(_ZOO))


def make_model(abbreviation: str):
    try:
        factory = _ZOO[abbreviation]
    except KeyError:
        raise UnknownAbbreviation(
            f"unknown model {abbreviation!r}; known: {', '.join(ABBREVIATIONS)}"
        ) from None
    return factory()
