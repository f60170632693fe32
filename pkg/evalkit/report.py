"""Report validation and text tables."""

from __future__ import annotations

from typing import Any, Mapping, Sequence

import pandas as pd

from core.config import IMPORTANCE_TOP_K
from core.errors import SchemaError

OVERALL_ROW = "overall"


def _require(mapping: Any, key: str, kind: type | tuple[type, ...], where: str) -> Any:
    if not isinstance(mapping, dict) or key not in mapping:
        raise SchemaError(f"report: {where} is missing {key!r}")
    value = mapping[key]
    if not isinstance(value, kind):
        raise SchemaError(f"report: {where}.{key} has type {type(value).__name__}")
    return value


def _check_unit(value: Any, where: str) -> None:
    if not isinstance(value, (int, float)) or not 0.0 <= value <= 1.0:
        raise SchemaError(f"report: {where} must be a number in [0, 1], got {value!r}")


def validate_report(report: Any) -> dict[str, Any]:
    """Raise SchemaError unless `report` has the emitted report layout with at least one model."""
    _require(report, "experiment", str, "report")
    models = _require(report, "models", list, "report")
    if not models:
        raise SchemaError("report has no models")
    for i, model in enumerate(models):
        where = f"models[{i}]"
        _require(model, "name", str, where)
        groups = _require(model, "per_group", list, where)
        if not groups:
            raise SchemaError(f"report: {where} has no groups")
        for j, group in enumerate(groups):
            gwhere = f"{where}.per_group[{j}]"
            _require(group, "group", str, gwhere)
            for key in ("mu", "sigma"):
                _check_unit(_require(group, key, (int, float), gwhere), f"{gwhere}.{key}")
            for value in _require(group, "folds", list, gwhere):
                _check_unit(value, f"{gwhere}.folds")
        overall = _require(model, "overall", dict, where)
        for key in ("mu", "sigma"):
            _check_unit(_require(overall, key, (int, float), f"{where}.overall"), f"{where}.overall.{key}")
    for i, row in enumerate(report.get("comparisons", [])):
        _require(row, "a", str, f"comparisons[{i}]")
        _require(row, "b", str, f"comparisons[{i}]")
    for i, row in enumerate(report.get("importance", [])):
        _require(row, "feature", str, f"importance[{i}]")
        _require(row, "weight", (int, float), f"importance[{i}]")
    return report


def _cell(mu: float, sigma: float) -> str:
    return f"{mu:.3f} ± {sigma:.3f}"


def score_frame(report: Mapping[str, Any]) -> pd.DataFrame:
    """Groups as rows, models as columns, "mu ± sigma" cells, overall row last."""
    columns: dict[str, dict[str, str]] = {}
    order: list[str] = []
    for model in report["models"]:
        cells: dict[str, str] = {}
        for group in model["per_group"]:
            cells[group["group"]] = _cell(group["mu"], group["sigma"])
            if group["group"] not in order:
                order.append(group["group"])
        cells[OVERALL_ROW] = _cell(model["overall"]["mu"], model["overall"]["sigma"])
        columns[model["name"]] = cells
    rows = [*order, OVERALL_ROW]
    frame = pd.DataFrame(columns, index=rows).fillna("-")
    frame.index.name = "group"
    return frame


def comparison_frame(report: Mapping[str, Any]) -> pd.DataFrame:
    rows = [
        {
            "a": row["a"],
            "b": row["b"],
            "basis": row.get("basis", ""),
            "n": row.get("n", 0),
            "t_p": _fmt_p(row.get("t_p")),
            "wilcoxon_p": _fmt_p(row.get("wilcoxon_p")),
        }
        for row in report.get("comparisons", [])
    ]
    return pd.DataFrame(rows, columns=["a", "b", "basis", "n", "t_p", "wilcoxon_p"])


def _fmt_p(p: float | None) -> str:
    return "undefined" if p is None else f"{p:.4g}"


def importance_table(importances: Sequence[Mapping[str, Any]], top_k: int = IMPORTANCE_TOP_K) -> pd.DataFrame:
    """Top-k features with rank, type, sub-type and weight."""
    ranked = sorted(importances, key=lambda r: (-float(r["weight"]), str(r["feature"])))[:top_k]
    frame = pd.DataFrame(
        [
            {
                "rank": i,
                "feature": row["feature"],
                "type": row.get("type", ""),
                "subtype": row.get("subtype", ""),
                "value": float(row["weight"]),
            }
            for i, row in enumerate(ranked, start=1)
        ],
        columns=["rank", "feature", "type", "subtype", "value"],
    )
    return frame


def importance_type_counts(importances: Sequence[Mapping[str, Any]], top_k: int = IMPORTANCE_TOP_K) -> dict[str, int]:
    table = importance_table(importances, top_k)
    return {str(k): int(v) for k, v in table["type"].value_counts().sort_index().items()}


def _banner(title: str) -> list[str]:
    return ["=" * 60, title, "=" * 60]


def render_tables(report: Mapping[str, Any], top_k: int = IMPORTANCE_TOP_K) -> str:
    validate_report(report)
    lines = _banner(f"Experiment: {report['experiment']} ({report.get('protocol', '')})")
    lines.append("F1 score (mean ± std)")
    lines.append(score_frame(report).to_string())
    comparisons = comparison_frame(report)
    if not comparisons.empty:
        lines += ["", f"Significance ({report.get('significance_basis') or 'n/a'} scores, two-sided)"]
        lines.append(comparisons.to_string(index=False))
    if report.get("importance"):
        lines += ["", f"Top {top_k} features by gain"]
        lines.append(importance_table(report["importance"], top_k).to_string(index=False, float_format="{:.4f}".format))
        counts = importance_type_counts(report["importance"], top_k)
        lines.append("per type: " + ", ".join(f"{k}={v}" for k, v in counts.items()))
    return "\n".join(lines) + "\n"


def comparison_table(id_report: Mapping[str, Any], ood_report: Mapping[str, Any]) -> pd.DataFrame:
    """Overall scores of the models present in both reports."""
    validate_report(id_report)
    validate_report(ood_report)
    ood = {m["name"]: m["overall"] for m in ood_report["models"]}
    rows = []
    for model in id_report["models"]:
        if model["name"] not in ood:
            continue
        a, b = model["overall"], ood[model["name"]]
        rows.append(
            {
                "model": model["name"],
                "in-distribution": _cell(a["mu"], a["sigma"]),
                "out-of-distribution": _cell(b["mu"], b["sigma"]),
                "drop": f"{a['mu'] - b['mu']:+.3f}",
            }
        )
    if not rows:
        raise SchemaError("the two reports share no model")
    return pd.DataFrame(rows, columns=["model", "in-distribution", "out-of-distribution", "drop"])


def render_comparison(id_report: Mapping[str, Any], ood_report: Mapping[str, Any]) -> str:
    table = comparison_table(id_report, ood_report)
    lines = _banner(f"In- vs out-of-distribution: {id_report['experiment']} / {ood_report['experiment']}")
    lines.append(table.to_string(index=False))
    return "\n".join(lines) + "\n"
