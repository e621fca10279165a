"""
Argument parser for the dfbasis command grammar.
"""
import argparse

from core.bb84 import EVE_CHOICES
from core.noise import NOISE_KINDS


def build_parser() -> argparse.ArgumentParser:
    """Create the top-level parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(
        prog="dfbasis",
        description="Construct and verify decoherence-free qubit states and "
                    "simulate BB84 over them.",
    )
    parser.add_argument("--config", metavar="PATH", help="JSON settings file")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    parser.add_argument("--show-resources", action="store_true",
                        help="print detected CPU/memory and worker recommendations first")

    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    gen = sub.add_parser("gen", help="write a named state to a DFVEC file")
    gen.add_argument("label", help="state label, e.g. s, 1, 011, 111, hatplus, 0010")
    gen.add_argument("output", help="output DFVEC path")

    verify = sub.add_parser("verify-invariance",
                            help="score a DFVEC state against random collective noise")
    verify.add_argument("input", help="DFVEC file")
    verify.add_argument("trials", nargs="?", type=int, help="Haar draws (default from settings)")
    verify.add_argument("seed", nargs="?", type=int, default=0, help="master seed (default 0)")

    dim = sub.add_parser("dim", help="dimension of the N-qubit DF subspace")
    dim.add_argument("n", type=int)

    sub.add_parser("table1", help="check the fixed setting for every pair of 6-qubit basis states")

    complete = sub.add_parser("complete", help="Gram-Schmidt completion of the product states")
    complete.add_argument("n", type=int, choices=(4, 6, 8))
    complete.add_argument("--with-supersinglet", action="store_true",
                          help="for N=8, include the supersinglet 0001 among the inputs")

    bb84 = sub.add_parser("bb84", help="simulate the permutation-based DF BB84 protocol")
    bb84.add_argument("--rounds", type=int, help="transmissions (default from settings)")
    bb84.add_argument("--noise", default="collective-haar",
                      help=f"noise model: {', '.join(NOISE_KINDS[:2])}, "
                           f"collective-fixed:<8 floats>, {NOISE_KINDS[3]}")
    bb84.add_argument("--static-noise", action="store_true",
                      help="draw the channel once per session instead of per round")
    bb84.add_argument("--eve", default="none", choices=EVE_CHOICES)
    bb84.add_argument("--seed", type=int, default=0)
    bb84.add_argument("--workers", type=int, help="worker processes, 0 = auto (default from settings)")

    distinguish = sub.add_parser("distinguish",
                                 help="test single-shot discrimination of two states under a setting")
    distinguish.add_argument("label_a")
    distinguish.add_argument("label_b")
    distinguish.add_argument("setting", help="per-qubit bases over {z, x}, e.g. zzxxzz")

    sub.add_parser("mub", help="check the BB84 signal bases are mutually unbiased")

    encode = sub.add_parser("encode", help="write cos(theta)|011> + e^(i phi) sin(theta)|101>")
    encode.add_argument("theta", type=float, help="radians")
    encode.add_argument("phi", type=float, help="radians")
    encode.add_argument("output", help="output DFVEC path")

    basis = sub.add_parser("basis", help="summarize the named N-qubit DF basis")
    basis.add_argument("n", type=int, choices=(2, 4, 6, 8))

    settings = sub.add_parser("settings", help="print the effective settings")
    settings.add_argument("--write", metavar="PATH", help="also save them as JSON")

    return parser
