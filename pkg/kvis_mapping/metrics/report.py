"""Evaluation reports: assembly, JSON output and comparison tables."""

import logging
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

from ..exceptions import LoadError, UndefinedScoreError
from ..grid.floorplan import BeliefMap, Floorplan
from ..models import EvalReport, MseScale
from .scores import iou, k_accuracy, mse

logger = logging.getLogger(__name__)


def evaluate(
    belief: BeliefMap,
    plan: Floorplan,
    est_k: Sequence[int],
    gt_k: Sequence[int],
    label: str = "",
    free_ray_wall_hits: Optional[int] = None,
) -> EvalReport:
    """Score an estimated map and its k predictions against ground truth.

    An undefined IOU (empty union) is reported as None.

    Raises:
        DomainError: If shapes or lengths differ
        UndefinedScoreError: If there are no evaluated points
    """
    acc = k_accuracy(est_k, gt_k)
    try:
        iou_score: Optional[float] = iou(belief, plan)
    except UndefinedScoreError as e:
        logger.warning(f"IOU undefined: {e}")
        iou_score = None
    report = EvalReport(
        label=label,
        area_m2=plan.free_area_m2,
        n_routers=max(len(plan.routers), 1),
        n_points=acc.true_count + acc.false_count,
        k_true=acc.true_count,
        k_false=acc.false_count,
        k_accuracy_pct=acc.pct,
        iou=iou_score,
        mse=mse(belief, plan, MseScale.NORMALIZED),
        mse_raw=mse(belief, plan, MseScale.RAW),
        free_ray_wall_hits=free_ray_wall_hits,
    )
    logger.info(
        f"Evaluation {label or '(unlabelled)'}: k-accuracy {report.k_accuracy_pct:.2f}%, "
        f"IOU {report.iou}, MSE {report.mse:.4f}"
    )
    return report


def _fmt_iou(r: EvalReport) -> str:
    return "n/a" if r.iou is None else f"{r.iou:.4f}"


ROWS: List[Tuple[str, Callable[[EvalReport], str]]] = [
    ("Area of Map (m^2)", lambda r: f"{r.area_m2:.2f}"),
    ("#Router", lambda r: str(r.n_routers)),
    ("#Data points", lambda r: str(r.n_points)),
    ("k-value Prediction True", lambda r: str(r.k_true)),
    ("k-value Prediction False", lambda r: str(r.k_false)),
    ("k-value Accuracy %", lambda r: f"{r.k_accuracy_pct:.2f}"),
    ("IOU Score", _fmt_iou),
    ("MSE Score", lambda r: f"{r.mse:.4f}"),
    ("MSE Score (8-bit)", lambda r: f"{r.mse_raw:.2f}"),
]


def format_report_table(reports: Union[EvalReport, Sequence[EvalReport]]) -> str:
    """Aligned text table with one column per report."""
    if isinstance(reports, EvalReport):
        reports = [reports]
    titles = [r.label or f"Exp. {i + 1}" for i, r in enumerate(reports)]
    cells = [[fmt(r) for r in reports] for _, fmt in ROWS]
    name_width = max(len(name) for name, _ in ROWS)
    col_widths = [
        max(len(titles[c]), *(len(row[c]) for row in cells)) for c in range(len(reports))
    ]
    lines = [
        " " * name_width + "  " + "  ".join(t.rjust(w) for t, w in zip(titles, col_widths))
    ]
    for (name, _), row in zip(ROWS, cells):
        lines.append(
            name.ljust(name_width) + "  " + "  ".join(v.rjust(w) for v, w in zip(row, col_widths))
        )
    return "\n".join(lines) + "\n"


def write_report(report: EvalReport, directory: Union[str, Path]) -> Tuple[Path, Path]:
    """Write report.json and report.txt into a directory."""
    directory = Path(directory)
    json_path = directory / "report.json"
    text_path = directory / "report.txt"
    json_path.write_text(report.model_dump_json(indent=2) + "\n")
    text_path.write_text(format_report_table(report))
    return json_path, text_path


def read_report(path: Union[str, Path]) -> EvalReport:
    """Load a report.json.

    Raises:
        LoadError: If the file is unreadable or invalid
    """
    path = Path(path)
    try:
        return EvalReport.model_validate_json(path.read_text())
    except (OSError, ValueError) as e:
        raise LoadError(path, f"cannot read report: {e}") from e
