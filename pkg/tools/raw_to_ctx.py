"""Convert the raw dump of tools/export_ctbllib.g into CTX fixture files.

    python3 tools/raw_to_ctx.py raw.txt src/blockforge/data/fixtures

Raw irrational values are "z<n>:a_0,...,a_{n-1}" over all n-th roots of unity;
they are rewritten in the reduced power basis used by CTX.
"""

import hashlib
import sys
from pathlib import Path

from blockforge.cyclotomic import CycInt, format_cycint

FILES = {
    "M11": "m11.ctx", "M22": "m22.ctx", "2.M22": "2m22.ctx", "3.M22": "3m22.ctx",
    "4.M22": "4m22.ctx", "6.M22": "6m22.ctx", "12.M22": "12m22.ctx",
    "SL3(7)": "sl3_7.ctx", "SU3(5)": "su3_5.ctx", "SL3(3)": "sl3_3.ctx",
}
SOURCE = "GAP 4 character table library (ctbllib), table identifier {ident}"


def convert_value(tok: str) -> str:
    if not tok.startswith("z"):
        return str(int(tok))
    n, body = tok[1:].split(":", 1)
    return format_cycint(CycInt.from_group_ring(int(n), [int(c) for c in body.split(",")]))


def main(raw_path, out_dir):
    text = Path(raw_path).read_text().replace("\\\n", "")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    lines = None
    for line in text.splitlines():
        head, _, rest = line.partition(" ")
        if head == "BEGIN":
            label, ident = rest.split()
            lines = [f"# {label}, exported from {SOURCE.format(ident=ident)}", f"GROUP {label}"]
        elif head in ("ORDER", "EXPONENT", "NCLASSES", "SIZES", "ORDERS", "INVERSE"):
            lines.append(line)
        elif head == "CHAR":
            lines.append("CHAR " + " ".join(convert_value(t) for t in rest.split()))
        elif head == "END":
            name = FILES[label]
            data = ("\n".join(lines) + "\n").encode()
            (out / name).write_bytes(data)
            manifest.append(f"{hashlib.sha256(data).hexdigest()}  {name}  {SOURCE.format(ident=ident)}")
            lines = None
    (out / "MANIFEST").write_text(
        "# sha256  file  provenance\n" + "\n".join(manifest) + "\n")


if __name__ == "__main__":
    main(*sys.argv[1:3])
