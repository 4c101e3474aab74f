import pytest

from hyperdec_plots.figures import SWEEP_FIELDS

ROW_DEFAULTS = {
    "L": "3", "p": "0.01", "q": "0.01", "r_dec": "2",
    "scheme": "deterministic", "trials": "200", "successes": "190",
    "logical_failures": "10", "timeouts": "0", "mean_rounds": "1.5",
    "mean_max_component": "2.0", "wall_ms": "0", "seed": "7",
}


def make_row(**overrides) -> dict[str, str]:
    row = dict(ROW_DEFAULTS)
    row.update({k: str(v) for k, v in overrides.items()})
    return row


@pytest.fixture
def write_sweep(tmp_path):
    """Factory writing a sweep CSV from row dicts; returns the path."""

    def _write(rows, name="sweep.csv", header=SWEEP_FIELDS, comment=True):
        path = tmp_path / name
        lines = []
        if comment:
            lines.append("# rng=philox4x64-seedseq")
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(row[h] for h in header))
        path.write_text("\n".join(lines) + "\n")
        return path

    return _write


@pytest.fixture
def write_weights(tmp_path):
    def _write(weights, name="weights.csv"):
        path = tmp_path / name
        lines = ["round,mean_weight"]
        for i, w in enumerate(weights):
            lines.append(f"{i},{w}")
        path.write_text("\n".join(lines) + "\n")
        return path

    return _write
