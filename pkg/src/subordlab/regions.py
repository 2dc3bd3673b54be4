"""Image domains of the superordinates and their signed membership margin.

``margin(region, w)`` is negative strictly inside, zero on the boundary and
positive outside.  All regions are open.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EXPDISK = "expdisk"
MOEBIUS = "moebius"
LEMNISCATE = "lemniscate"

PRINCIPAL = "principal"
FOLDED = "folded"


class RegionSpecError(ValueError):
    pass


@dataclass(frozen=True)
class Region:
    """One of ExpDisk, MoebiusDisk{|(a w + b)/(c w + d)| < k} or Lemniscate.

    ``anchor`` is the value h(0) of the superordinate whose image this is;
    it defaults to 1 for ExpDisk and Lemniscate and to the preimage -b/a of
    the Moebius centre otherwise.
    """

    variant: str
    a: complex = 1.0
    b: complex = 0.0
    c: complex = 0.0
    d: complex = 1.0
    k: float = 1.0
    anchor: complex | None = None
    label: str = ""

    def __post_init__(self):
        if self.variant not in (EXPDISK, MOEBIUS, LEMNISCATE):
            raise ValueError(f"unknown region variant {self.variant!r}")
        if self.variant == MOEBIUS:
            if not self.k > 0:
                raise ValueError("Moebius disk radius k must be positive")
            if self.a * self.d - self.b * self.c == 0:
                raise ValueError("degenerate Moebius map (ad - bc = 0)")
        if self.anchor is None:
            anchor = 1.0 if self.variant != MOEBIUS else (-self.b / self.a if self.a != 0 else None)
            object.__setattr__(self, "anchor", None if anchor is None else complex(anchor))

    def __str__(self) -> str:
        if self.label:
            return self.label
        if self.variant == MOEBIUS:
            return f"|({self.a:g} w + {self.b:g})/({self.c:g} w + {self.d:g})| < {self.k:g}"
        return self.variant


def exp_disk() -> Region:
    return Region(EXPDISK, label="|log w| < 1")


def lemniscate() -> Region:
    return Region(LEMNISCATE, label="|w^2 - 1| < 1")


def disk(center: complex, radius: float, anchor: complex | None = None) -> Region:
    center = complex(center)
    return Region(
        MOEBIUS, 1.0, -center, 0.0, 1.0, float(radius),
        anchor=center if anchor is None else anchor,
        label=f"|w - {_fmt(center)}| < {radius:g}",
    )


def moebius_disk(a, b, c, d, k, anchor=None, label="") -> Region:
    return Region(MOEBIUS, complex(a), complex(b), complex(c), complex(d), float(k), anchor, label)


def janowski(A: float, B: float) -> Region:
    """Image of (1 + A z)/(1 + B z): |(w - 1)/(A - B w)| < 1."""
    return moebius_disk(1, -1, -B, A, 1.0, anchor=1.0, label=f"(1+{A:g}z)/(1+{B:g}z)")


def _fmt(c: complex) -> str:
    return f"{c.real:g}" if c.imag == 0 else f"{c:g}"


def margin(region: Region, w, branch: str = PRINCIPAL):
    """Signed distance-like margin; +inf at log singularities and poles.

    ``branch="folded"`` replaces the principal argument by arctan(Im/Re), the
    quadrant-free argument that appears in the closed-form proofs; it only
    affects ExpDisk and never exceeds the principal value.
    """
    w = np.asarray(w, dtype=complex)
    with np.errstate(all="ignore"):
        if region.variant == EXPDISK:
            mod = np.log(np.abs(w))
            if branch == PRINCIPAL:
                arg = np.angle(w)
            elif branch == FOLDED:
                arg = np.where(w.real == 0, np.pi / 2, np.arctan(w.imag / w.real))
            else:
                raise ValueError(f"unknown branch {branch!r}")
            out = np.hypot(mod, arg) - 1.0
            out = np.where(w == 0, np.inf, out)
        elif region.variant == MOEBIUS:
            den = region.c * w + region.d
            out = np.abs((region.a * w + region.b) / den) - region.k
            out = np.where(den == 0, np.inf, out)
        else:
            out = np.abs(w * w - 1.0) - 1.0
        out = np.where(np.isnan(out), np.inf, out)
    return out if out.ndim else float(out)


def contains(region: Region, w):
    m = margin(region, w)
    return bool(m < 0) if np.ndim(m) == 0 else m < 0


def boundary_point(region: Region, t, lobe: str = "right"):
    """Point of the boundary curve at parameter t in [0, 2 pi).

    For the lemniscate one call sweeps one lobe; ``lobe`` selects which.
    """
    t = np.asarray(t, dtype=float)
    zeta = np.exp(1j * t)
    if region.variant == EXPDISK:
        w = np.exp(zeta)
    elif region.variant == MOEBIUS:
        u = region.k * zeta
        with np.errstate(all="ignore"):
            w = (region.d * u - region.b) / (region.a - region.c * u)
    else:
        if lobe not in ("right", "left"):
            raise ValueError("lobe must be 'right' or 'left'")
        w = np.sqrt(1.0 + zeta)
        if lobe == "left":
            w = -w
    return w if w.ndim else complex(w)


# --- CLI mini-language -----------------------------------------------------


def _tokens(body: str) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    key = None
    for tok in body.replace(" ", ",").split(","):
        if not tok:
            continue
        if "=" in tok:
            key, val = tok.split("=", 1)
            out.setdefault(key, []).append(val)
        elif key is None:
            raise RegionSpecError(f"value {tok!r} before any key")
        else:
            out[key].append(tok)
    return out


def _complex(vals: list[str], key: str) -> complex:
    try:
        if len(vals) == 1:
            return complex(vals[0].replace("i", "j"))
        if len(vals) == 2:
            return complex(float(vals[0]), float(vals[1]))
    except ValueError:
        pass
    raise RegionSpecError(f"cannot read {key}={','.join(vals)} as a complex number")


def parse_region(spec: str) -> Region:
    """Parse ``expdisk``, ``lemniscate``, ``disk:c=<re>,<im>,rho=<r>`` or
    ``moebius:a=..,b=..,c=..,d=..,k=..`` (optionally ``anchor=..``)."""
    spec = spec.strip()
    head, _, body = spec.partition(":")
    head = head.lower()
    if head in (EXPDISK, LEMNISCATE):
        if body:
            raise RegionSpecError(f"{head} takes no parameters")
        return exp_disk() if head == EXPDISK else lemniscate()
    kv = _tokens(body)
    anchor = _complex(kv.pop("anchor"), "anchor") if "anchor" in kv else None
    try:
        if head == "disk":
            rho = float(kv.pop("rho")[0])
            center = _complex(kv.pop("c", ["0"]), "c")
            region = disk(center, rho, anchor)
        elif head == MOEBIUS:
            vals = {key: _complex(kv.pop(key), key) for key in "abcd"}
            k = float(kv.pop("k")[0])
            region = moebius_disk(vals["a"], vals["b"], vals["c"], vals["d"], k, anchor)
        else:
            raise RegionSpecError(f"unknown region kind {head!r}")
    except KeyError as exc:
        raise RegionSpecError(f"{spec!r}: missing parameter {exc.args[0]}") from None
    except ValueError as exc:
        if isinstance(exc, RegionSpecError):
            raise
        raise RegionSpecError(f"{spec!r}: {exc}") from None
    if kv:
        raise RegionSpecError(f"{spec!r}: unexpected parameter(s) {sorted(kv)}")
    return region


def region_to_spec(region: Region) -> str:
    if region.variant in (EXPDISK, LEMNISCATE):
        return region.variant

    def c(v):
        v = complex(v)
        return f"{v.real!r},{v.imag!r}"

    spec = f"moebius:a={c(region.a)},b={c(region.b)},c={c(region.c)},d={c(region.d)},k={region.k!r}"
    if region.anchor is not None:
        spec += f",anchor={c(region.anchor)}"
    return spec
