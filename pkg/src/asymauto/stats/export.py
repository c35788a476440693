"""Plot-ready CSV emitters with a fixed column order."""

from __future__ import annotations

import io


def fmt(x) -> str:
    if isinstance(x, float):
        s = format(x, ".12g")
        # keep floats recognisable as floats: 1 -> 1.0
        return s if any(c in s for c in ".eni") else s + ".0"
    if x is None:
        return ""
    return str(x)


def to_csv(header: list[str], rows, comments: list[str] | None = None) -> str:
    buf = io.StringIO()
    for c in comments or []:
        buf.write(f"# {c}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(x) for x in row) + "\n")
    return buf.getvalue()


def complexity_csv(profile, comments=None) -> str:
    return to_csv(["l", "p", "p_tilde", "p_tilde_half"], profile.rows(), comments)


def density_csv(checkpoints, densities, comments=None) -> str:
    return to_csv(["N", "density"], zip(checkpoints, densities), comments)


def log_average_csv(results, comments=None) -> str:
    return to_csv(["j", "log_average", "passed"], [(r.j, r.value, r.passed) for r in results], comments)


def class_count_csv(per_depth, comments=None) -> str:
    return to_csv(["depth", "class_count"], per_depth, comments)
