"""INI-style run configuration: parsing, validation, round-trip serialization.

The file format is flat ``key = value`` pairs under section headers.  A
``[spec]`` section describes the mollifier instance; command-specific
sections (``[eval]``, ``[optimize]``, ``[surface]``, ``[verify]``) hold
the remaining knobs.  Unknown sections or keys are rejected with their
location so typos cannot silently change a run.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, field
from typing import Optional

from .polynomials import Polynomial, MollifierPolynomial, SmoothingPolynomial
from .terms import MollifierSpec, SECTION5, ONE_PIECE

_SPEC_KEYS = {"pieces", "r", "nu", "theta", "strict", "q_odd"}
_EVAL_KEYS = {"convention", "order"}
_OPT_KEYS = {
    "budget",
    "degrees",
    "q_odd_terms",
    "r_min",
    "r_max",
    "optimize_r",
    "order",
    "restarts",
    "convention",
}
_SURFACE_KEYS = {"r_min", "r_max", "r_points", "nu"}
_VERIFY_KEYS = {"cutoff", "max_ell", "deligne_cutoff", "lemma8_m", "rankin_x"}


@dataclass
class RunConfig:
    spec: Optional[MollifierSpec] = None
    eval_options: dict = field(default_factory=dict)
    optimize_options: dict = field(default_factory=dict)
    surface_options: dict = field(default_factory=dict)
    verify_options: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    def to_ini(self) -> str:
        cp = configparser.ConfigParser()
        for section, items in self.raw.items():
            cp[section] = {k: v for k, v in items.items()}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()


def _floats(text: str) -> list:
    return [float(tok) for tok in text.replace(",", " ").split()]


def _ints(text: str) -> list:
    return [int(tok) for tok in text.replace(",", " ").split()]


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _reject_unknown(section: str, items: dict, allowed: set, extra: set = frozenset()):
    for key in items:
        if key not in allowed and key not in extra:
            raise ValueError(f"unknown key {key!r} in section [{section}]")


def parse_config(text: str, strict_override: Optional[bool] = None) -> RunConfig:
    cp = configparser.ConfigParser()
    cp.read_string(text)
    cfg = RunConfig()
    known_sections = {"spec", "eval", "optimize", "surface", "verify"}
    for section in cp.sections():
        if section not in known_sections:
            raise ValueError(f"unknown section [{section}]")
        cfg.raw[section] = dict(cp[section])

    if cp.has_section("spec"):
        items = dict(cp["spec"])
        n_pieces = int(items.get("pieces", "1"))
        piece_keys = {f"p{i}" for i in range(1, n_pieces + 1)}
        _reject_unknown("spec", items, _SPEC_KEYS, piece_keys)
        missing = piece_keys - set(items)
        if missing:
            raise ValueError(f"section [spec] missing polynomial keys: {sorted(missing)}")
        pieces = []
        for i in range(1, n_pieces + 1):
            coeffs = _floats(items[f"p{i}"])
            pieces.append(MollifierPolynomial(Polynomial(coeffs), i))
        smoothing = SmoothingPolynomial(tuple(_floats(items.get("q_odd", ""))))
        strict = _bool(items.get("strict", "true"))
        if strict_override is not None:
            strict = strict and strict_override
        cfg.spec = MollifierSpec(
            pieces=pieces,
            smoothing=smoothing,
            R=float(items["r"]),
            nu=_floats(items["nu"]),
            theta=float(items.get("theta", "0")),
            strict=strict,
        )

    if cp.has_section("eval"):
        items = dict(cp["eval"])
        _reject_unknown("eval", items, _EVAL_KEYS)
        conv = items.get("convention", SECTION5)
        if conv not in (SECTION5, ONE_PIECE):
            raise ValueError(
                f"section [eval]: convention must be {SECTION5!r} or {ONE_PIECE!r}"
            )
        cfg.eval_options = {
            "convention": conv,
            "order": int(items.get("order", "24")),
        }

    if cp.has_section("optimize"):
        items = dict(cp["optimize"])
        _reject_unknown("optimize", items, _OPT_KEYS)
        cfg.optimize_options = {
            "budget": int(items.get("budget", "500")),
            "degrees": _ints(items["degrees"]) if "degrees" in items else None,
            "q_odd_terms": int(items.get("q_odd_terms", "4")),
            "r_min": float(items.get("r_min", "0.1")),
            "r_max": float(items.get("r_max", "10.0")),
            "optimize_r": _bool(items.get("optimize_r", "true")),
            "order": int(items.get("order", "12")),
            "restarts": int(items.get("restarts", "3")),
            "convention": items.get("convention", SECTION5),
        }

    if cp.has_section("surface"):
        items = dict(cp["surface"])
        _reject_unknown("surface", items, _SURFACE_KEYS)
        cfg.surface_options = {
            "r_min": float(items.get("r_min", "0.1")),
            "r_max": float(items.get("r_max", "10.0")),
            "r_points": int(items.get("r_points", "100")),
            "nu": _floats(items.get("nu", "0.5")),
        }

    if cp.has_section("verify"):
        items = dict(cp["verify"])
        _reject_unknown("verify", items, _VERIFY_KEYS)
        cfg.verify_options = {
            "cutoff": int(items.get("cutoff", "10000")),
            "max_ell": int(items.get("max_ell", "3")),
            "deligne_cutoff": int(items.get("deligne_cutoff", "100000")),
            "lemma8_m": int(items.get("lemma8_m", "1000000")),
            "rankin_x": int(items.get("rankin_x", "1000000")),
        }

    return cfg


def load_config(path, strict_override: Optional[bool] = None) -> RunConfig:
    with open(path) as fh:
        return parse_config(fh.read(), strict_override=strict_override)


def spec_to_sections(spec: MollifierSpec) -> dict:
    """Echo a spec in the config key-value vocabulary."""
    out = {
        "pieces": str(spec.n_pieces),
        "r": repr(spec.R),
        "nu": ", ".join(repr(v) for v in spec.nu),
        "theta": repr(spec.theta),
        "strict": str(spec.strict).lower(),
        "q_odd": ", ".join(repr(c) for c in spec.smoothing.odd_coeffs),
    }
    for i, piece in enumerate(spec.pieces, start=1):
        out[f"p{i}"] = ", ".join(repr(c) for c in piece.base.coeffs.tolist())
    return out
