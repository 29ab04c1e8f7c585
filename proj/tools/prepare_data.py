#!/usr/bin/env python3
"""Extract the COMPAS and Statlog German credit CSVs used by the bundled configs.

Both datasets ship inside the `responsibly` wheel on PyPI, which makes them
reachable from environments that can only see a package index:

    pip download --no-deps responsibly==0.1.2 -d /tmp/wheel
    python3 tools/prepare_data.py /tmp/wheel/responsibly-0.1.2-py3-none-any.whl

Original sources:
    COMPAS  https://github.com/propublica/compas-analysis/ (compas-scores-two-years.csv)
    Statlog https://archive.ics.uci.edu/ml/datasets/statlog+(german+credit+data)
"""
import csv
import io
import pathlib
import sys
import zipfile

ROOT = pathlib.Path(__file__).resolve().parent.parent

COMPAS_COLUMNS = ["age", "sex", "race", "priors_count", "juv_fel_count",
                  "juv_misd_count", "juv_other_count", "c_charge_degree",
                  "two_year_recid"]

GERMAN_COLUMNS = ["checking_account", "duration", "credit_history", "purpose",
                  "credit_amount", "savings", "employment_since",
                  "installment_rate", "personal_status", "other_debtors",
                  "residence_since", "property", "age", "installment_plans",
                  "housing", "existing_credits", "job", "people_liable",
                  "telephone", "foreign_worker", "credit"]

# personal_status codes A92 and A95 are the female ones; the rest are male.
FEMALE_STATUS = {"A92", "A95"}


def write_compas(raw: str, out: pathlib.Path) -> int:
    reader = csv.reader(io.StringIO(raw))
    header = next(reader)
    # The ProPublica file repeats a few column names; keep the first occurrence.
    index = {}
    for i, name in enumerate(header):
        index.setdefault(name, i)
    rows = 0
    with out.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(COMPAS_COLUMNS)
        for rec in reader:
            w.writerow([rec[index[c]] for c in COMPAS_COLUMNS])
            rows += 1
    return rows


def write_german(raw: str, out: pathlib.Path) -> int:
    rows = 0
    with out.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(GERMAN_COLUMNS[:-1] + ["sex", "credit"])
        for line in raw.splitlines():
            fields = line.split()
            if not fields:
                continue
            assert len(fields) == len(GERMAN_COLUMNS), line
            label = "good" if fields[-1] == "1" else "bad"
            sex = "female" if fields[8] in FEMALE_STATUS else "male"
            w.writerow(fields[:-1] + [sex, label])
            rows += 1
    return rows


def main() -> None:
    if len(sys.argv) != 2:
        sys.exit(__doc__)
    with zipfile.ZipFile(sys.argv[1]) as z:
        compas = z.read("responsibly/dataset/compas/compas-scores-two-years.csv").decode()
        german = z.read("responsibly/dataset/german/german.data").decode()
    n = write_compas(compas, ROOT / "data/compas/compas.csv")
    print(f"data/compas/compas.csv: {n} rows")
    n = write_german(german, ROOT / "data/statlog/german.csv")
    print(f"data/statlog/german.csv: {n} rows")


if __name__ == "__main__":
    main()
