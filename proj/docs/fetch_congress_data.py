#!/usr/bin/env python3
"""Download the public congress/prosocial-language workbook and convert it to
the CSV layout the acceptance runner expects (date,congress,prosocial).

The workbook's "Summary Variables" sheet holds year in column A, month in
column B and the prosocial-language level in column H. The disapproval column
has to be named explicitly with --congress-col (a spreadsheet letter); see
docs/congress-data.md.

Requires pandas and openpyxl.
"""

import argparse
import pathlib
import string
import sys
import urllib.request

import pandas as pd

URL = "https://osf.io/94gc5/?action=download&version=1"
SHEET = "Summary Variables"
FIRST_ROW, LAST_ROW = 4, 234  # spreadsheet rows, inclusive


def column_index(letter: str) -> int:
    letter = letter.strip().upper()
    if len(letter) != 1 or letter not in string.ascii_uppercase[:20]:
        raise argparse.ArgumentTypeError(f"expected a column letter A-T, got {letter!r}")
    return string.ascii_uppercase.index(letter)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--congress-col", required=True, type=column_index,
                    help="spreadsheet column holding congressional disapproval")
    ap.add_argument("--xlsx", type=pathlib.Path, help="use a local copy instead of downloading")
    ap.add_argument("--out", type=pathlib.Path,
                    default=pathlib.Path(__file__).resolve().parent / "data" / "congress_prosocial.csv")
    args = ap.parse_args()

    src = args.xlsx
    if src is None:
        src = args.out.with_suffix(".xlsx")
        src.parent.mkdir(parents=True, exist_ok=True)
        print(f"downloading {URL}", file=sys.stderr)
        urllib.request.urlretrieve(URL, src)

    sheet = pd.read_excel(src, sheet_name=SHEET, header=None, skiprows=FIRST_ROW - 1,
                          nrows=LAST_ROW - FIRST_ROW + 1)
    sheet = sheet.reindex(columns=range(20))  # A..T, trailing empty columns included
    sheet = sheet[pd.to_numeric(sheet[0], errors="coerce").notna()]  # drop if A==.
    out = pd.DataFrame({
        "date": [f"{int(y):04d}-{int(m):02d}" for y, m in zip(sheet[0], sheet[1])],
        "congress": pd.to_numeric(sheet[args.congress_col], errors="coerce"),
        "prosocial": pd.to_numeric(sheet[column_index("H")], errors="coerce"),
    })
    args.out.parent.mkdir(parents=True, exist_ok=True)
    out.to_csv(args.out, index=False, float_format="%.17g", na_rep="")
    print(f"wrote {len(out)} rows to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
