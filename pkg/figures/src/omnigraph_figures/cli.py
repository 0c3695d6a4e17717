"""Command-line entry point: ``figures <spec.json>``.

The spec file holds one figure spec object or a list of them.  Exit codes:
0 success, 2 bad spec or schema mismatch.
"""

from __future__ import annotations

import json
import sys

from .render import FigureSpec, SchemaError, render


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print("usage: figures <spec.json>", file=sys.stderr)
        return 2
    try:
        with open(argv[0]) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read spec: {exc}", file=sys.stderr)
        return 2
    specs = raw if isinstance(raw, list) else [raw]
    try:
        for item in specs:
            out = render(FigureSpec.from_dict(item))
            print(out)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
