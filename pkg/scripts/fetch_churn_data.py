#!/usr/bin/env python3
"""Download the public bank-churn dataset (Churn_Modelling.csv, 10000 rows)
into data/, where the test suite and `eda churn-report` pick it up.

The file is not redistributed with this repository. It is the Kaggle
"Churn Modelling" dataset; grab it with the Kaggle CLI or from any of the
public mirrors, e.g.:

    kaggle datasets download -d shrutimechlearn/churn-modelling \
        -f Churn_Modelling.csv -p data/

or point this script at a mirror URL:

    python scripts/fetch_churn_data.py https://example.org/Churn_Modelling.csv

The full-scale acceptance checks run only when data/Churn_Modelling.csv is
present (or EDA_CHURN_CSV points at the file); otherwise they are skipped
explicitly.
"""

from __future__ import annotations

import sys
import urllib.request
from pathlib import Path

DEST = Path(__file__).resolve().parent.parent / "data" / "Churn_Modelling.csv"


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__)
        return 2 if not DEST.exists() else 0
    url = sys.argv[1]
    DEST.parent.mkdir(parents=True, exist_ok=True)
    print(f"fetching {url} -> {DEST}")
    with urllib.request.urlopen(url) as resp:
        DEST.write_bytes(resp.read())
    print(f"wrote {DEST} ({DEST.stat().st_size} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
