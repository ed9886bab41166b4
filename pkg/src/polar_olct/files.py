"""Flat-file formats: parameter files, spectrum CSVs, field/report CSVs.

Everything is plain text with '#' comments, written with fixed significant
digits so identical inputs produce byte-identical outputs.
"""

from __future__ import annotations

import numpy as np

from .params import OffsetParams
from .synthesis import FourierBesselSpectrum

__all__ = [
    "parse_keyvalue",
    "read_params_file",
    "write_spectrum_csv",
    "read_spectrum_csv",
    "write_field_csv",
    "write_transform_csv",
]

_FLOAT_FMT = "{:.15g}"


def parse_keyvalue(text: str) -> dict:
    """key = value lines; '#' starts a comment; later keys win."""
    out = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line: {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def read_params_file(path) -> tuple[OffsetParams, dict]:
    """Parameter file with keys a,b,c,d,tau1,tau2,eta1,eta2 and optional
    Omega, K, mode; returns the bundle plus the extras."""
    with open(path, "r", encoding="utf-8") as fh:
        kv = parse_keyvalue(fh.read())
    def f(key, default=0.0):
        return float(kv.get(key, default))
    params = OffsetParams(f("a"), f("b", 1.0), f("c"), f("d"),
                          (f("tau1"), f("tau2")), (f("eta1"), f("eta2")))
    extras = {}
    if "Omega" in kv or "omega" in kv:
        extras["omega"] = float(kv.get("Omega", kv.get("omega")))
    if "K" in kv or "k" in kv:
        extras["k_max"] = int(kv.get("K", kv.get("k")))
    if "mode" in kv:
        extras["mode"] = kv["mode"]
    return params, extras


def write_spectrum_csv(path, spectrum: FourierBesselSpectrum) -> None:
    """First data line holds omega,K (and the order map); the remaining rows
    are n,j,Re(eps),Im(eps) with j starting at 1."""
    lines = ["# omega,K,order_map,fixed_order"]
    lines.append(",".join([
        _FLOAT_FMT.format(spectrum.omega), str(spectrum.k_max),
        spectrum.order_map, str(spectrum.fixed_order)]))
    lines.append("# n,j,Re(eps),Im(eps)")
    for n in sorted(spectrum.coefficients):
        eps = spectrum.coefficients[n]
        for j, e in enumerate(eps, start=1):
            lines.append(",".join([str(n), str(j),
                                   _FLOAT_FMT.format(e.real),
                                   _FLOAT_FMT.format(e.imag)]))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_spectrum_csv(path) -> FourierBesselSpectrum:
    with open(path, "r", encoding="utf-8") as fh:
        rows = [ln.split("#", 1)[0].strip() for ln in fh]
    rows = [r for r in rows if r]
    head = rows[0].split(",")
    omega, k_max = float(head[0]), int(head[1])
    order_map = head[2] if len(head) > 2 else "per_order"
    fixed_order = int(head[3]) if len(head) > 3 else 0
    entries: dict[int, dict[int, complex]] = {}
    for row in rows[1:]:
        n_s, j_s, re_s, im_s = row.split(",")
        entries.setdefault(int(n_s), {})[int(j_s)] = float(re_s) + 1j * float(im_s)
    coeffs = {}
    for n, by_j in entries.items():
        j_top = max(by_j)
        arr = np.zeros(j_top, dtype=complex)
        for j, e in by_j.items():
            arr[j - 1] = e
        coeffs[n] = arr
    return FourierBesselSpectrum(omega, k_max, coeffs, order_map, fixed_order)


def _grid_lines(header, cols):
    lines = [header]
    n = len(cols[0])
    for i in range(n):
        lines.append(",".join(_FLOAT_FMT.format(c[i]) for c in cols))
    return lines


def write_field_csv(path, r, theta, values) -> None:
    r = np.asarray(r, float).ravel()
    theta = np.asarray(theta, float).ravel()
    values = np.asarray(values, complex).ravel()
    lines = _grid_lines("r,theta,Re(f),Im(f)", [r, theta, values.real, values.imag])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_transform_csv(path, rho, phi, values) -> None:
    rho = np.asarray(rho, float).ravel()
    phi = np.asarray(phi, float).ravel()
    values = np.asarray(values, complex).ravel()
    lines = _grid_lines("rho,phi,Re(F),Im(F)", [rho, phi, values.real, values.imag])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
