# Map evaluation metrics and reports

from .report import evaluate, format_report_table, read_report, write_report
from .scores import KAccuracy, encode_ternary, iou, k_accuracy, mse

__all__ = [
    "KAccuracy",
    "k_accuracy",
    "iou",
    "mse",
    "encode_ternary",
    "evaluate",
    "format_report_table",
    "write_report",
    "read_report",
]
