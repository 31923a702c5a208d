"""Figure rendering for batch verification runs.

matplotlib is imported lazily and pinned to the Agg backend so batch
reports can render PNGs on headless machines.
"""

from typing import Sequence

_ORDER = ("CERTIFIED", "REJECTED", "ERROR")
_COLORS = ("#2a9d4e", "#d64545", "#8a8a8a")


def render_figure(rows: Sequence[tuple[str, str, int]], out_path: str) -> None:
    """One PNG: verdict counts on the left, per-file times on the right.

    rows are (file name, verdict, milliseconds) in report order.
    """
    import matplotlib
    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    counts = [sum(1 for _, v, _ in rows if v == verdict) for verdict in _ORDER]
    names = [name for name, _, _ in rows]
    times = [ms for _, _, ms in rows]

    fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
    left.bar(_ORDER, counts, color=_COLORS)
    left.set_ylabel("files")
    left.set_title("verdicts")
    left.yaxis.get_major_locator().set_params(integer=True)

    right.barh(range(len(names)), times, color="#4a7dbd")
    right.set_yticks(range(len(names)), labels=names, fontsize=8)
    right.invert_yaxis()
    right.set_xlabel("time (ms)")
    right.set_title("verification time")

    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
