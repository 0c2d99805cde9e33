"""Default seeds and the plain-text key=value seed format.

A seed file is a sequence of records separated by blank lines::

    family=ii
    k=6
    xi=0.99,-0.05,0.31,0.22,-0.60

``#`` starts a comment.  ``xi`` holds chart coordinates (matrix entries).
"""

from dataclasses import dataclass

import numpy as np

from .charts import Chart
from .errors import UnknownFamily

FAMILY_CHART = {"a": 0, "i": 1, "ii": 1, "m": 2}

DEFAULT_SEEDS_TEXT = """\
# k = 6 minima found by gradient descent in M(6,6)^{Delta S_5}
family=a
k=6
xi=-0.66,0.33

family=i
k=6
xi=-0.59,0.39,0.01,0.02,1.07

family=ii
k=6
xi=0.99,-0.05,0.31,0.22,-0.60

# Delta(S_{k-2} x S_2) family, seeded at large k
family=m
k=10000
xi=1.0,-2.567e-8,1.999e-4,1.283e-4,1.929e-4,-0.999
"""


@dataclass
class SeedRecord:
    family: str
    k: float
    xi: np.ndarray

    @property
    def chart(self):
        return family_chart(self.family)


def family_chart(family):
    try:
        return Chart.from_p(FAMILY_CHART[str(family).lower()])
    except KeyError:
        raise UnknownFamily(f"unknown family {family!r} (expected one of {sorted(FAMILY_CHART)})") from None


def parse_seeds(text):
    """Parse seed records; raises ValueError on malformed input."""
    records, cur = [], {}

    def flush():
        if not cur:
            return
        missing = {"family", "k", "xi"} - cur.keys()
        if missing:
            raise ValueError(f"seed record missing keys {sorted(missing)}")
        fam = cur["family"].strip().lower()
        chart = family_chart(fam)
        xi = np.array([float(t) for t in cur["xi"].split(",")])
        if xi.size != chart.m or not np.all(np.isfinite(xi)):
            raise ValueError(f"seed for family {fam} needs {chart.m} finite values")
        records.append(SeedRecord(fam, float(cur["k"]), xi))
        cur.clear()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            flush()
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        cur[key] = val
    flush()
    return records


def load_seeds(path=None):
    if path is None:
        return parse_seeds(DEFAULT_SEEDS_TEXT)
    with open(path, encoding="utf-8") as fh:
        return parse_seeds(fh.read())


def seed_for(family, records=None):
    records = parse_seeds(DEFAULT_SEEDS_TEXT) if records is None else records
    fam = str(family).lower()
    family_chart(fam)
    for rec in records:
        if rec.family == fam:
            return rec
    raise UnknownFamily(f"no seed for family {family!r}")
