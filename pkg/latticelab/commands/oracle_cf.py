import csv
import logging

from ..exponents import ContinuedFraction, cf_oracle_2d
from . import print_table, register_command, require

logger = logging.getLogger(__name__)


@register_command("oracle-cf")
def cmd_oracle_cf(config) -> int:
    """Exponent sequence of a continued fraction's convergents."""
    cf = ContinuedFraction.parse(require(config.quotients, "--quotients", "oracle-cf"))
    count = config.count if config.count is not None else len(cf.quotients)
    result = cf_oracle_2d(cf, count)
    rows = [[s.k, s.q, repr(s.product), repr(s.gamma)] for s in result.steps]
    print_table(["k", "q", "product", "gamma"], rows)
    print(f"estimate={result.estimate!r} unbounded={result.unbounded}")
    if config.emits("csv"):
        path = config.out_dir / "oracle_cf.csv"
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["k", "q", "product", "gamma"])
            writer.writerows(rows)
        logger.info("wrote %s", path)
    return 0
