"""The seventeen implicit terms and the concrete realizations the engine's
default lexicon must reproduce, keyed by which sample dataset they apply to.

Each entry lists every acceptable realization as a comparable signature; an
interpretation list passes when at least one of its realizations matches at
least one listed signature exactly.

Signature shapes:
  ("measure", attribute)
  ("formula-measure", kind, frozenset(inputs))
  ("predicate", attribute, comparator, policy, value)
  ("formula-predicate", kind, frozenset(inputs), comparator, policy, value)
"""

from compareviz.data import ThresholdSpec
from compareviz.resolver import Interpretation

MEDALS = frozenset({"Gold", "Silver", "Bronze"})
BODY = frozenset({"Weight", "Age", "Height"})


def signature(interp: Interpretation):
    if interp.kind == "measure":
        if interp.formula is not None:
            return ("formula-measure", interp.formula.kind,
                    frozenset(interp.formula.inputs))
        return ("measure", interp.measure)
    pred = interp.predicate
    threshold = pred.threshold
    if isinstance(threshold, ThresholdSpec):
        policy, value = threshold.policy, threshold.value
    else:
        policy, value = "constant", float(threshold)
    if interp.formula is not None:
        return ("formula-predicate", interp.formula.kind,
                frozenset(interp.formula.inputs), pred.comparator, policy, value)
    return ("predicate", pred.attribute, pred.comparator, policy, value)


# (term label, dataset, role, lookup phrase, acceptable signatures)
EXPECTED_17 = [
    ("performance (streaming)", "netflix", "attribute", "performance", [
        ("measure", "Watched"),
        ("measure", "IMDB rating"),
        ("measure", "Rotten tomatoes rating"),
        ("formula-measure", "difference-of", frozenset({"Box office", "Budget"})),
        ("measure", "Box office"),
    ]),
    ("popularity (streaming)", "netflix", "attribute", "popularity", [
        ("formula-measure", "difference-of", frozenset({"Box office", "Budget"})),
        ("measure", "Watched"),
    ]),
    ("high rated", "netflix", "value", "high rated", [
        ("predicate", "Rotten tomatoes rating", ">", "constant", 80),
        ("predicate", "Rotten tomatoes rating", ">", "mean", None),
        ("predicate", "IMDB rating", ">", "mean", None),
        ("predicate", "IMDB rating", ">", "constant", 8),
    ]),
    ("high budget", "netflix", "value", "high budget", [
        ("predicate", "Budget", ">", "mean", None),
        ("predicate", "Budget", ">", "percentile", 95),
    ]),
    ("low budget", "netflix", "value", "low budget", [
        ("predicate", "Budget", "<", "mean", None),
        ("predicate", "Budget", "<", "percentile", 5),
        ("predicate", "Budget", "=", "percentile", 0),
    ]),
    ("long runtime", "netflix", "value", "long runtime", [
        ("predicate", "Duration", ">", "constant", 100),
        ("predicate", "Duration", ">", "percentile", 80),
    ]),
    ("achievements", "olympics", "attribute", "achievements", [
        ("formula-measure", "sum-of", MEDALS),
    ]),
    ("performance (medals)", "olympics", "attribute", "performance", [
        ("formula-measure", "sum-of", MEDALS),
        ("formula-measure", "weighted-sum-of", MEDALS),
    ]),
    ("physique", "olympics", "attribute", "physique", [
        ("measure", "Height"),
        ("measure", "Weight"),
        ("formula-measure", "weighted-sum-of", BODY),
    ]),
    ("tall athlete", "olympics", "value", "tall athlete", [
        ("predicate", "Height", ">", "mean", None),
        ("predicate", "Height", ">", "median", None),
        ("predicate", "Height", ">=", "constant", 180),
    ]),
    ("short athlete", "olympics", "value", "short athlete", [
        ("predicate", "Height", "<", "mean", None),
        ("predicate", "Height", "<", "median", None),
        ("predicate", "Height", "<", "constant", 180),
    ]),
    ("strong physique", "olympics", "value", "strong physique", [
        ("predicate", "Weight", ">", "mean", None),
    ]),
    ("successful player", "olympics", "value", "successful player", [
        ("formula-predicate", "sum-of", MEDALS, ">", "constant", 0),
    ]),
    ("high achieving", "olympics", "value", "high achieving", [
        ("predicate", "Gold", ">", "constant", 0),
    ]),
    ("young athlete", "olympics", "value", "young athlete", [
        ("predicate", "Age", "<", "median", None),
        ("predicate", "Age", "<", "constant", 20),
    ]),
    ("top-winning", "olympics", "value", "top-winning", [
        ("predicate", "Gold", ">", "constant", 0),
        ("formula-predicate", "weighted-sum-of", MEDALS, ">", "constant", 0),
    ]),
    ("senior athlete", "olympics", "value", "senior athlete", [
        ("predicate", "Age", ">", "mean", None),
    ]),
]
