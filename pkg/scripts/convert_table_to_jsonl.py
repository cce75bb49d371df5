"""Convert a delimited post-editing table into the edit-record JSONL schema.

Columns are mapped explicitly, so any export (TSV or CSV) with one row per
edited segment can be converted, e.g.

    python scripts/convert_table_to_jsonl.py pe.tsv out.jsonl --delimiter tab \\
        --map source=mt_output target=post_edit edit_time_s=time_ms:ms \\
              keystrokes=keys annotator=translator --id-column segment_id

A ``:ms`` suffix divides a time column by 1000. Rows whose mapped fields fail
validation are reported and skipped.
"""
import argparse
import csv
import sys

from lzdist.dataset import FIELD_NAMES, DatasetError, record_from_dict, write_jsonl

CONVERTERS = {
    "edit_time_s": float,
    "keystrokes": lambda v: int(float(v)),
}


def parse_mapping(items):
    mapping = {}
    for item in items:
        field, _, column = item.partition("=")
        if field not in FIELD_NAMES or not column:
            raise SystemExit(f"bad mapping {item!r}; fields are {', '.join(FIELD_NAMES)}")
        column, _, unit = column.partition(":")
        mapping[field] = (column, unit)
    return mapping


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("table")
    parser.add_argument("out")
    parser.add_argument("--map", nargs="+", required=True, metavar="FIELD=COLUMN[:ms]")
    parser.add_argument("--id-column", help="defaults to the 1-based row number")
    parser.add_argument("--delimiter", default=",", help="a character, or 'tab'")
    args = parser.parse_args()

    mapping = parse_mapping(args.map)
    delimiter = "\t" if args.delimiter == "tab" else args.delimiter
    records, skipped = [], 0
    with open(args.table, encoding="utf-8", newline="") as fh:
        for rowno, row in enumerate(csv.DictReader(fh, delimiter=delimiter), 1):
            obj = {"id": row[args.id_column] if args.id_column else str(rowno)}
            try:
                for field, (column, unit) in mapping.items():
                    value = row[column]
                    if value in ("", None):
                        continue
                    value = CONVERTERS.get(field, str)(value)
                    if unit == "ms":
                        value = value / 1000.0
                    obj[field] = value
                records.append(record_from_dict(obj))
            except (KeyError, ValueError, DatasetError) as exc:
                skipped += 1
                print(f"row {rowno}: {exc}", file=sys.stderr)
    write_jsonl(records, args.out)
    print(f"wrote {len(records)} records to {args.out}, skipped {skipped}")


if __name__ == "__main__":
    main()
