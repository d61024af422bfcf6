"""Command-line front end: analyze, embed, extract, recover, psnr.

Exit codes: 0 success, 1 usage or I/O or format failure, 2 insufficient
embedding capacity. The block size is an out-of-band parameter and must
match between embed and the decode commands.
"""

import argparse
import json
import math
import re
import sys

from .bits import BitString
from .crypto import KeyMaterial
from .errors import InsufficientCapacity, RdheiError
from .image import Role, psnr, read_pgm, write_pgm
from .pipeline import analyze, conceal, restore, reveal


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _block_size(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(\d+)x(\d+)", text)
    if not m or int(m.group(1)) < 1 or int(m.group(2)) < 1:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _hex_key(text: str) -> bytes:
    try:
        return KeyMaterial.from_hex(kc=text).kc
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rdhei", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, kc=False, kd=False, ks=False, out=False):
        p.add_argument("input", help="input PGM file")
        p.add_argument(
            "--block-size",
            type=_block_size,
            default=(3, 3),
            metavar="WxH",
            help="block width x height (default 3x3)",
        )
        if kc:
            p.add_argument("--kc", type=_hex_key, metavar="HEX32",
                           help="content-owner key (32 hex digits)")
        if kd:
            p.add_argument("--kd", type=_hex_key, metavar="HEX32",
                           help="data-hider key (32 hex digits)")
        if ks:
            p.add_argument("--ks", type=_hex_key, metavar="HEX32",
                           help="optional shared key for the auxiliary stream")
        if out:
            p.add_argument("--out", required=True, help="output file")

    p = sub.add_parser("analyze", help="print a JSON capacity report")
    common(p, kc=True)

    p = sub.add_parser("embed", help="embed a payload file into a plain PGM")
    common(p, kc=True, kd=True, ks=True, out=True)
    p.add_argument("--payload", required=True, help="payload file (bytes)")

    p = sub.add_parser("extract", help="extract the payload from a marked PGM")
    common(p, kd=True, ks=True, out=True)

    p = sub.add_parser("recover", help="losslessly rebuild the original image")
    common(p, kc=True, ks=True, out=True)

    p = sub.add_parser("psnr", help="PSNR between two PGM files")
    p.add_argument("input", help="first PGM file")
    p.add_argument("other", help="second PGM file")
    return parser


def _load(path: str):
    with open(path, "rb") as fh:
        return read_pgm(fh.read())


def _require(args, names):
    for name in names:
        if getattr(args, name, None) is None:
            raise RdheiError(f"this command requires --{name}")


def _run(args) -> int:
    if args.command == "analyze":
        profile = analyze(_load(args.input), args.block_size, kc=args.kc)
        print(json.dumps(profile.as_report(), indent=2))
        return 0

    if args.command == "embed":
        _require(args, ("kc", "kd"))
        with open(args.payload, "rb") as fh:
            payload = BitString.from_bytes(fh.read())
        keys = KeyMaterial(kc=args.kc, kd=args.kd, ks=args.ks)
        marked, profile = conceal(_load(args.input), payload, keys, args.block_size)
        with open(args.out, "wb") as fh:
            fh.write(write_pgm(marked))
        stream_bits = profile.aux_bits + 32 + len(payload)
        print(f"embedded {len(payload)} payload bits ({stream_bits} stream bits)")
        return 0

    if args.command == "extract":
        _require(args, ("kd",))
        keys = KeyMaterial(kd=args.kd, ks=args.ks)
        marked = _load(args.input).copy(role=Role.MARKED)
        payload = reveal(marked, keys, args.block_size)
        with open(args.out, "wb") as fh:
            fh.write(payload.to_bytes())
        print(f"extracted {len(payload)} bits")
        return 0

    if args.command == "recover":
        _require(args, ("kc",))
        keys = KeyMaterial(kc=args.kc, ks=args.ks)
        marked = _load(args.input).copy(role=Role.MARKED)
        original = restore(marked, keys, args.block_size)
        with open(args.out, "wb") as fh:
            fh.write(write_pgm(original))
        print(f"recovered {original.width}x{original.height} image")
        return 0

    if args.command == "psnr":
        value = psnr(_load(args.input), _load(args.other))
        print("inf" if math.isinf(value) else f"{value:.6f}")
        return 0

    raise AssertionError(f"unhandled command {args.command}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except InsufficientCapacity as exc:
        print(f"rdhei: {exc}", file=sys.stderr)
        return 2
    except (RdheiError, OSError, ValueError) as exc:
        print(f"rdhei: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
