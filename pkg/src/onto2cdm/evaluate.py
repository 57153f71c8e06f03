"""Recall/precision comparison of a generated model against a gold model."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from statistics import mean

from onto2cdm.model import ConceptualModel

CATEGORIES = ("entities", "relationships", "attributes", "generalizations")


@dataclass(frozen=True)
class CategoryDiff:
    correct: frozenset
    missing: frozenset
    spurious: frozenset


@dataclass(frozen=True)
class ModelDiff:
    entities: CategoryDiff
    relationships: CategoryDiff
    attributes: CategoryDiff
    generalizations: CategoryDiff

    def items(self):
        return [(c, getattr(self, c)) for c in CATEGORIES]


def _elements(m: ConceptualModel, strict_multiplicity: bool) -> dict:
    """Per category, a map from case-insensitive match key to a display tuple."""
    out = {c: {} for c in CATEGORIES}
    for e in m.entities:
        out["entities"].setdefault(e.name.casefold(), (e.name,))
        for a in e.attributes:
            key = (e.name.casefold(), a.name.casefold(), a.datatype.value)
            out["attributes"].setdefault(key, (e.name, a.name, a.datatype.value))
    for r in m.relationships:
        key = r.key
        shown = (r.name, r.source, r.target)
        if strict_multiplicity:
            key += (r.multiplicity.lower, r.multiplicity.upper)
            shown += (r.multiplicity.encode(),)
        out["relationships"].setdefault(key, shown)
    for g in m.generalizations:
        out["generalizations"].setdefault(g.key, (g.sub, g.super))
    return out


def diff(generated: ConceptualModel, gold: ConceptualModel, strict_multiplicity: bool = False) -> ModelDiff:
    gen = _elements(generated, strict_multiplicity)
    ref = _elements(gold, strict_multiplicity)
    parts = {}
    for c in CATEGORIES:
        g, r = gen[c], ref[c]
        parts[c] = CategoryDiff(
            frozenset(g[k] for k in g.keys() & r.keys()),
            frozenset(r[k] for k in r.keys() - g.keys()),
            frozenset(g[k] for k in g.keys() - r.keys()),
        )
    return ModelDiff(**parts)


@dataclass(frozen=True)
class Score:
    n_correct: int
    n_gold: int
    n_generated: int
    recall: float
    precision: float
    intervention: float

    @classmethod
    def from_counts(cls, n_correct, n_missing, n_spurious) -> Score:
        n_gold = n_correct + n_missing
        n_generated = n_correct + n_spurious
        return cls(
            n_correct,
            n_gold,
            n_generated,
            n_correct / n_gold if n_gold else 1.0,
            n_correct / n_generated if n_generated else 1.0,
            (n_missing + n_spurious) / n_gold if n_gold else 0.0,
        )


@dataclass(frozen=True)
class EvalReport:
    categories: dict
    total: Score
    average: dict

    def to_dict(self) -> dict:
        return {
            "categories": {c: asdict(s) for c, s in self.categories.items()},
            "total": asdict(self.total),
            "average": dict(self.average),
        }

    def to_text(self) -> str:
        head = f"{'category':<16}{'correct':>8}{'gold':>6}{'gen':>6}{'recall':>9}{'precision':>11}{'intervention':>14}"
        rows = [head]
        for name, s in list(self.categories.items()) + [("total (micro)", self.total)]:
            rows.append(f"{name:<16}{s.n_correct:>8}{s.n_gold:>6}{s.n_generated:>6}"
                        f"{s.recall:>9.3f}{s.precision:>11.3f}{s.intervention:>14.3f}")
        a = self.average
        rows.append(f"{'average (macro)':<36}{a['recall']:>9.3f}{a['precision']:>11.3f}{a['intervention']:>14.3f}")
        return "\n".join(rows) + "\n"


def metrics(d: ModelDiff) -> EvalReport:
    """Recall = correct/gold and precision = correct/generated, per category.

    Intervention is the share of gold elements that must be added or removed,
    ``(missing + spurious) / gold``. The micro total pools the counts of all
    categories; the macro average is the mean over categories that are
    non-empty in at least one of the two models.
    """
    scores = {c: Score.from_counts(len(cd.correct), len(cd.missing), len(cd.spurious)) for c, cd in d.items()}
    total = Score.from_counts(
        sum(len(cd.correct) for _, cd in d.items()),
        sum(len(cd.missing) for _, cd in d.items()),
        sum(len(cd.spurious) for _, cd in d.items()),
    )
    used = [s for s in scores.values() if s.n_gold or s.n_generated]
    if used:
        average = {
            "recall": mean(s.recall for s in used),
            "precision": mean(s.precision for s in used),
            "intervention": mean(s.intervention for s in used),
        }
    else:
        average = {"recall": 1.0, "precision": 1.0, "intervention": 0.0}
    return EvalReport(scores, total, average)
