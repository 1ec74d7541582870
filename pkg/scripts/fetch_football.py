#!/usr/bin/env python3
"""Download the college-football network fixture (115 nodes, 613 edges).

The dataset is published by M. E. J. Newman's network data page. This
build environment has no outbound network access, so the file cannot be
bundled; run this script on a machine that does, then re-run the tests.

Usage: python3 scripts/fetch_football.py
"""
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

URL = "http://www-personal.umich.edu/~mejn/netdata/football.zip"
DEST = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "football.gml"


def main() -> int:
    print(f"downloading {URL} ...")
    with urllib.request.urlopen(URL, timeout=60) as resp:
        payload = resp.read()
    with zipfile.ZipFile(io.BytesIO(payload)) as zf:
        name = next(n for n in zf.namelist() if n.endswith("football.gml"))
        DEST.write_bytes(zf.read(name))
    print(f"wrote {DEST}")
    # sanity-check the fixture
    sys.path.insert(0, str(DEST.parent.parent.parent / "src"))
    from commsim import load_gml
    with open(DEST) as fh:
        graph, _, dropped = load_gml(fh)
    print(f"n={graph.n} m={graph.m} dropped={dropped}")
    if (graph.n, graph.m) != (115, 613):
        print("unexpected size: expected n=115 m=613", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
