"""DNF rule sets over threshold literals.

A rule set is a disjunction of conjunctive rules for a single positive
class; an input that fires no rule receives the default class. Rules and
rule sets are immutable and kept in a canonical order so that structural
equality is well defined and bit-exact.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import EvaluationError, ParameterError, RuleParseError

RULESET_FORMAT_VERSION = 1

OPS = ("<=", ">", "==")
_OP_RANK = {"<=": 0, ">": 1, "==": 2}


@dataclass(frozen=True)
class Literal:
    """One threshold comparison on one feature, e.g. x3 > 0.5."""

    feature: int
    op: str
    threshold: float

    def __post_init__(self):
        if self.op not in OPS:
            raise ParameterError(f"unknown literal op {self.op!r}")
        if self.feature < 0:
            raise ParameterError("literal feature index must be >= 0")

    @property
    def sort_key(self):
        return (self.feature, _OP_RANK[self.op], self.threshold)

    def holds(self, value: float) -> bool:
        if self.op == "<=":
            return bool(value <= self.threshold)
        if self.op == ">":
            return bool(value > self.threshold)
        return bool(value == self.threshold)

    def column(self, X: np.ndarray) -> np.ndarray:
        """Vectorized evaluation against a feature matrix column."""
        col = X[:, self.feature]
        if self.op == "<=":
            return col <= self.threshold
        if self.op == ">":
            return col > self.threshold
        return col == self.threshold


def _merge_literals(literals: Iterable[Literal]) -> tuple[Literal, ...]:
    """Sort literals and keep the tightest bound per (feature, op).

    For "<=" the tightest is the smallest threshold, for ">" the largest.
    Distinct "==" literals on one feature are kept as-is (the conjunction
    is then unsatisfiable, which is a valid if useless rule).
    """
    by_key: dict[tuple[int, str], Literal] = {}
    eq_literals: set[Literal] = set()
    for lit in literals:
        if lit.op == "==":
            eq_literals.add(lit)
            continue
        key = (lit.feature, lit.op)
        prev = by_key.get(key)
        if prev is None:
            by_key[key] = lit
        elif lit.op == "<=":
            by_key[key] = lit if lit.threshold < prev.threshold else prev
        else:
            by_key[key] = lit if lit.threshold > prev.threshold else prev
    merged = list(by_key.values()) + list(eq_literals)
    return tuple(sorted(merged, key=lambda l: l.sort_key))


@dataclass(frozen=True)
class Rule:
    """A conjunction of literals predicting ``class_label`` when satisfied."""

    literals: tuple[Literal, ...]
    class_label: int

    def __post_init__(self):
        if len(self.literals) == 0:
            raise ParameterError("a rule must contain at least one literal")
        if self.class_label not in (0, 1):
            raise ParameterError("class_label must be 0 or 1")
        object.__setattr__(self, "literals", _merge_literals(self.literals))

    @property
    def sort_key(self):
        return tuple(l.sort_key for l in self.literals)

    def covers(self, X: np.ndarray) -> np.ndarray:
        """Boolean firing mask of this rule over a (n, d) feature matrix."""
        if X.ndim != 2:
            raise EvaluationError("expected a 2-D feature matrix")
        n_features = X.shape[1]
        for lit in self.literals:
            if lit.feature >= n_features:
                raise EvaluationError(
                    f"rule references feature {lit.feature} but input has "
                    f"{n_features} features"
                )
        mask = np.ones(X.shape[0], dtype=bool)
        for lit in self.literals:
            mask &= lit.column(X)
        return mask


@dataclass(frozen=True)
class RuleSet:
    """Single-polarity DNF: fire any rule -> positive class, else default."""

    rules: tuple[Rule, ...]
    default_class: int
    positive_class: int

    def __post_init__(self):
        if {self.default_class, self.positive_class} != {0, 1}:
            raise ParameterError(
                "default_class and positive_class must be complementary in {0,1}"
            )
        for rule in self.rules:
            if rule.class_label != self.positive_class:
                raise ParameterError(
                    "all rules must carry class_label == positive_class"
                )
        object.__setattr__(self, "rules", tuple(self.rules))


def make_ruleset(rules: Iterable[Rule], positive_class: int) -> RuleSet:
    """Build a canonical rule set from rules for ``positive_class``."""
    rs = RuleSet(
        rules=tuple(rules),
        default_class=1 - positive_class,
        positive_class=positive_class,
    )
    return canonicalize(rs)


def eval_rule(rule: Rule, x: Sequence[float]) -> bool:
    """True iff every literal of ``rule`` is satisfied by sample ``x``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise EvaluationError("expected a 1-D feature vector")
    for lit in rule.literals:
        if lit.feature >= x.shape[0]:
            raise EvaluationError(
                f"rule references feature {lit.feature} but input has "
                f"{x.shape[0]} features"
            )
        if not lit.holds(x[lit.feature]):
            return False
    return True


def predict(rs: RuleSet, x: Sequence[float]) -> int:
    """Class for one sample: positive if any rule fires, else default."""
    for rule in rs.rules:
        if eval_rule(rule, x):
            return rs.positive_class
    return rs.default_class


def predict_batch(rs: RuleSet, X: np.ndarray) -> np.ndarray:
    """Vectorized ``predict`` over a (n, d) matrix; returns int labels."""
    X = np.asarray(X, dtype=float)
    fired = np.zeros(X.shape[0], dtype=bool)
    for rule in rs.rules:
        fired |= rule.covers(X)
    out = np.full(X.shape[0], rs.default_class, dtype=np.int64)
    out[fired] = rs.positive_class
    return out


def complexity(rs: RuleSet) -> tuple[int, int]:
    """(number of rules, total number of literals across rules)."""
    n_rules = len(rs.rules)
    n_terms = sum(len(r.literals) for r in rs.rules)
    return n_rules, n_terms


def canonicalize(rs: RuleSet) -> RuleSet:
    """Sort and dedupe rules; literal merging happens in Rule construction.

    Output is independent of the input ordering, and applying this twice
    equals applying it once.
    """
    seen = set()
    unique = []
    for rule in rs.rules:
        if rule.sort_key not in seen:
            seen.add(rule.sort_key)
            unique.append(rule)
    unique.sort(key=lambda r: r.sort_key)
    return RuleSet(
        rules=tuple(unique),
        default_class=rs.default_class,
        positive_class=rs.positive_class,
    )


def rulesets_equal(a: RuleSet, b: RuleSet) -> bool:
    """Structural equality of canonical forms; thresholds compared bit-exactly."""
    ca, cb = canonicalize(a), canonicalize(b)
    return (
        ca.positive_class == cb.positive_class
        and ca.default_class == cb.default_class
        and ca.rules == cb.rules
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def to_json(rs: RuleSet) -> str:
    doc = {
        "format_version": RULESET_FORMAT_VERSION,
        "positive_class": rs.positive_class,
        "default_class": rs.default_class,
        "rules": [
            {
                "literals": [
                    {"feature": l.feature, "op": l.op, "threshold": l.threshold}
                    for l in rule.literals
                ]
            }
            for rule in rs.rules
        ],
    }
    return json.dumps(doc, indent=2)


def from_json(text: str) -> RuleSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RuleParseError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise RuleParseError("top-level JSON value must be an object")
    version = doc.get("format_version")
    if version != RULESET_FORMAT_VERSION:
        raise RuleParseError(f"unsupported format_version {version!r}")
    try:
        positive = int(doc["positive_class"])
        rules = []
        for ri, rdoc in enumerate(doc["rules"]):
            literals = []
            for li, ldoc in enumerate(rdoc["literals"]):
                literals.append(
                    Literal(
                        feature=int(ldoc["feature"]),
                        op=str(ldoc["op"]),
                        threshold=float(ldoc["threshold"]),
                    )
                )
            rules.append(Rule(literals=tuple(literals), class_label=positive))
    except (KeyError, TypeError, ValueError) as exc:
        raise RuleParseError(f"malformed rule set document: {exc}") from exc
    rs = RuleSet(
        rules=tuple(rules),
        default_class=1 - positive,
        positive_class=positive,
    )
    if int(doc["default_class"]) != rs.default_class:
        raise RuleParseError("default_class must be the complement of positive_class")
    return rs


def _feature_token(index: int, feature_names: Sequence[str] | None) -> str:
    if feature_names is not None:
        return feature_names[index]
    return f"x{index + 1}"


def to_text(rs: RuleSet, feature_names: Sequence[str] | None = None) -> str:
    """Human-readable form, one rule per line plus the ELSE default line."""
    lines = []
    for rule in rs.rules:
        conj = " AND ".join(
            f"{_feature_token(l.feature, feature_names)} {l.op} {l.threshold!r}"
            for l in rule.literals
        )
        lines.append(f"IF {conj} THEN class={rule.class_label}")
    lines.append(f"ELSE class={rs.default_class}")
    return "\n".join(lines) + "\n"


_TEXT_LITERAL = re.compile(r"^\s*(\S+)\s*(<=|==|>)\s*(\S+)\s*$")
_TEXT_RULE = re.compile(r"^IF\s+(.*)\s+THEN\s+class=(\d)\s*$")
_TEXT_ELSE = re.compile(r"^ELSE\s+class=(\d)\s*$")


def from_text(text: str, feature_names: Sequence[str] | None = None) -> RuleSet:
    """Inverse of :func:`to_text` (default x<i> naming unless names given)."""
    name_to_index = None
    if feature_names is not None:
        name_to_index = {name: i for i, name in enumerate(feature_names)}
    rules = []
    default_class = None
    class_labels = set()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise RuleParseError("empty rule set text")
    for lineno, line in enumerate(lines, start=1):
        m = _TEXT_ELSE.match(line.strip())
        if m:
            if lineno != len(lines):
                raise RuleParseError(f"line {lineno}: ELSE must be the final line")
            default_class = int(m.group(1))
            continue
        m = _TEXT_RULE.match(line.strip())
        if m is None:
            raise RuleParseError(f"line {lineno}: expected an IF/THEN or ELSE line")
        literals = []
        for part in m.group(1).split(" AND "):
            lm = _TEXT_LITERAL.match(part)
            if lm is None:
                raise RuleParseError(f"line {lineno}: bad literal {part!r}")
            token, op, raw = lm.groups()
            if name_to_index is not None:
                if token not in name_to_index:
                    raise RuleParseError(f"line {lineno}: unknown feature {token!r}")
                feature = name_to_index[token]
            else:
                if not token.startswith("x"):
                    raise RuleParseError(f"line {lineno}: unknown feature {token!r}")
                try:
                    feature = int(token[1:]) - 1
                except ValueError as exc:
                    raise RuleParseError(
                        f"line {lineno}: unknown feature {token!r}"
                    ) from exc
            try:
                threshold = float(raw)
            except ValueError as exc:
                raise RuleParseError(
                    f"line {lineno}: bad threshold {raw!r}"
                ) from exc
            literals.append(Literal(feature=feature, op=op, threshold=threshold))
        label = int(m.group(2))
        class_labels.add(label)
        rules.append(Rule(literals=tuple(literals), class_label=label))
    if default_class is None:
        raise RuleParseError("missing ELSE line")
    if len(class_labels) > 1:
        raise RuleParseError("rules carry more than one class label")
    positive = class_labels.pop() if class_labels else 1 - default_class
    if positive == default_class:
        raise RuleParseError("rule class equals the default class")
    return RuleSet(
        rules=tuple(rules), default_class=default_class, positive_class=positive
    )
