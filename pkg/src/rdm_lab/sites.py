"""Single-site potentials, displacement configurations, and displacement laws.

A site is a compactly supported bump of radius r < 1/4 placed inside a unit
cell; a configuration assigns each cell n a displacement omega_n in the
closed box [-d_max, d_max]^d with d_max = 1/2 - r, so every displaced bump
stays inside its own cell.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import ConfigError, SiteError

# Profiles are cut where 1 - t^2 < _EDGE; the dropped ring carries values
# below exp(-1/_EDGE) ~ 1e-434, i.e. exact zero in double precision, and the
# cut keeps the rational prefactors of the derivatives finite.
_EDGE = 1e-3

_CELL_KEY_OFFSET = 1 << 20  # shifts (possibly negative) cell indices into uint range

_SHAPES = ("bump", "cosine_sq", "table", "alt2")
_LAWS = ("corner_uniform", "box_uniform", "corner_smoothed", "minimizer")


def _bump_profile(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    s = 1.0 - t * t
    inside = s > _EDGE
    si = s[inside]
    out[inside] = np.exp(1.0 - 1.0 / si)
    return out


def _bump_dprofile(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    s = 1.0 - t * t
    inside = s > _EDGE
    si = s[inside]
    ti = t[inside]
    out[inside] = np.exp(1.0 - 1.0 / si) * (-2.0 * ti / (si * si))
    return out


def _cos_profile(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    out[inside] = np.cos(0.5 * np.pi * t[inside]) ** 2
    return out


def _cos_dprofile(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    out[inside] = -0.5 * np.pi * np.sin(np.pi * t[inside])
    return out


@dataclasses.dataclass
class SingleSite:
    """Compactly supported, reflection-symmetric single-site potential.

    Shapes:

    * ``bump``      - sign * amplitude * prod_j exp(1 - 1/(1 - (x_j/r)^2))
    * ``cosine_sq`` - sign * amplitude * prod_j cos^2(pi x_j / (2 r))
    * ``table``     - product of a sampled radial profile per coordinate
    * ``alt2``      - q = (Delta phi)/phi for phi = 1 + c * bump(|x|/r); the
                      generalized ground state phi is retained so the ground
                      energy vanishes identically in the displacement
    """

    shape: str = "bump"
    sign: int = -1
    amplitude: float = 10.0
    radius: float = 0.2
    table_t: np.ndarray | None = None
    table_v: np.ndarray | None = None
    phi_c: float = 0.5

    def __post_init__(self):
        if self.shape not in _SHAPES:
            raise SiteError(f"unknown site shape {self.shape!r}")
        if self.sign not in (-1, 1):
            raise SiteError("sign must be -1 or +1")
        if self.amplitude < 0:
            raise SiteError("amplitude must be nonnegative")
        if not (0.0 < self.radius < 0.25):
            raise SiteError("radius must lie in (0, 1/4)")
        if self.shape == "table":
            if self.table_t is None or self.table_v is None:
                raise SiteError("table shape requires profile samples")
            self.table_t = np.asarray(self.table_t, dtype=float)
            self.table_v = np.asarray(self.table_v, dtype=float)
            if self.table_t.ndim != 1 or self.table_t.shape != self.table_v.shape:
                raise SiteError("profile sample arrays must be equal-length 1d")
            if np.any(np.diff(self.table_t) <= 0):
                raise SiteError("profile abscissae must increase")
            if self.table_t[0] != 0.0 or abs(self.table_t[-1] - 1.0) > 1e-12:
                raise SiteError("profile abscissae must span [0, 1]")
            if self.table_v[-1] != 0.0:
                raise SiteError("profile must vanish at the support edge")
        if self.shape == "alt2" and (self.sign != 1 or self.amplitude != 1.0):
            raise SiteError("alt2 sites fix sign=+1, amplitude=1")

    @property
    def d_max(self):
        return 0.5 - self.radius

    def key(self):
        """Hashable identity, used for caching reference energies."""
        if self.shape == "table":
            extra = (tuple(self.table_t), tuple(self.table_v))
        else:
            extra = (self.phi_c,)
        return (self.shape, self.sign, self.amplitude, self.radius) + extra

    # -- evaluation ------------------------------------------------------

    def _profile(self, t):
        if self.shape == "bump":
            return _bump_profile(t)
        if self.shape == "cosine_sq":
            return _cos_profile(t)
        if self.shape == "table":
            return np.interp(np.abs(t), self.table_t, self.table_v, right=0.0)
        raise SiteError("alt2 sites are radial, not coordinate products")

    def q(self, x):
        """Evaluate the potential at points of shape (..., d)."""
        x = np.asarray(x, dtype=float)
        if self.shape == "alt2":
            return self._alt2_q(x)
        t = x / self.radius
        out = self._profile(t[..., 0])
        for j in range(1, x.shape[-1]):
            out = out * self._profile(t[..., j])
        return self.sign * self.amplitude * out

    def grad_q(self, x):
        """Gradient of q at points of shape (..., d)."""
        x = np.asarray(x, dtype=float)
        d = x.shape[-1]
        if self.shape in ("bump", "cosine_sq"):
            dprof = _bump_dprofile if self.shape == "bump" else _cos_dprofile
            t = x / self.radius
            profs = [self._profile(t[..., j]) for j in range(d)]
            out = np.empty_like(x)
            for i in range(d):
                g = dprof(t[..., i]) / self.radius
                for j in range(d):
                    if j != i:
                        g = g * profs[j]
                out[..., i] = g
            return self.sign * self.amplitude * out
        # table and alt2: second-order central differences in each coordinate
        step = 1e-6 * self.radius
        out = np.empty_like(x)
        for i in range(d):
            hi = x.copy()
            lo = x.copy()
            hi[..., i] += step
            lo[..., i] -= step
            out[..., i] = (self.q(hi) - self.q(lo)) / (2.0 * step)
        return out

    def phi(self, x):
        """Generalized ground state of an alt2 site."""
        if self.shape != "alt2":
            raise SiteError("phi is only defined for alt2 sites")
        x = np.asarray(x, dtype=float)
        rho = np.sqrt(np.sum(x * x, axis=-1))
        return 1.0 + self.phi_c * _bump_profile(rho / self.radius)

    def _alt2_q(self, x):
        d = x.shape[-1]
        rho = np.sqrt(np.sum(x * x, axis=-1))
        t = rho / self.radius
        out = np.zeros_like(t)
        s = 1.0 - t * t
        inside = s > _EDGE
        si = s[inside]
        ti = t[inside]
        psi = np.exp(1.0 - 1.0 / si)
        # psi'' and psi'/t in closed form; psi'/t = -2 psi / s^2 has no
        # singularity at the origin.
        psi_dd = (4.0 * ti * ti / si**4 - 2.0 / si**2 - 8.0 * ti * ti / si**3) * psi
        lap_phi = (self.phi_c / self.radius**2) * (
            psi_dd - 2.0 * (d - 1) * psi / si**2
        )
        phi = 1.0 + self.phi_c * psi
        out[inside] = lap_phi / phi
        return self.sign * self.amplitude * out

    def q_inf(self, d):
        """Sup norm of q in dimension d (exact for product shapes)."""
        if self.shape in ("bump", "cosine_sq"):
            return float(self.amplitude)
        if self.shape == "table":
            return float(self.amplitude) * float(np.max(np.abs(self.table_v))) ** d
        t = np.linspace(0.0, 1.0, 4097)
        x = np.zeros((t.size, d))
        x[:, 0] = t * self.radius
        return float(np.max(np.abs(self.q(x))))

    # -- serialization ---------------------------------------------------

    def to_dict(self):
        out = {
            "shape": self.shape,
            "sign": self.sign,
            "amplitude": self.amplitude,
            "radius": self.radius,
        }
        if self.shape == "table":
            out["table_t"] = self.table_t.tolist()
            out["table_v"] = self.table_v.tolist()
        if self.shape == "alt2":
            out["phi_c"] = self.phi_c
        return out

    @classmethod
    def from_dict(cls, data):
        kwargs = dict(data)
        if "table_t" in kwargs:
            kwargs["table_t"] = np.asarray(kwargs["table_t"], dtype=float)
            kwargs["table_v"] = np.asarray(kwargs["table_v"], dtype=float)
        return cls(**kwargs)


def default_site():
    """Attractive smooth bump: sign -1, amplitude 10, radius 0.2."""
    return SingleSite()


def make_alt2_site(radius=0.2, c=0.5):
    """Site with identically vanishing ground-state energy.

    Built from phi = 1 + c * bump(|x|/r) via q = (Delta phi)/phi, so phi is
    a positive generalized ground state at energy zero for every
    displacement; the landscape E_0(a) is flat at 0 up to discretization.
    """
    if not (0.0 < c):
        raise SiteError("phi bump weight c must be positive")
    return SingleSite(shape="alt2", sign=1, amplitude=1.0, radius=radius, phi_c=c)


# ---------------------------------------------------------------------------
# displacement configurations


@dataclasses.dataclass
class DisplacementConfig:
    """Per-cell displacements on a block of cells.

    ``values`` has shape cells + (d,); cell n along axis a is stored at
    index n - start[a].
    """

    start: tuple
    values: np.ndarray
    d_max: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.start = tuple(int(s) for s in self.start)
        if self.values.ndim != len(self.start) + 1:
            raise ConfigError("values must have shape cells + (d,)")

    @property
    def d(self):
        return self.values.shape[-1]

    @property
    def cells(self):
        return self.values.shape[:-1]

    def omega(self, cell):
        idx = tuple(int(c) - s for c, s in zip(cell, self.start))
        return self.values[idx]

    def to_dict(self):
        return {
            "start": list(self.start),
            "d_max": self.d_max,
            "values": self.values.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            start=tuple(data["start"]),
            values=np.asarray(data["values"], dtype=float),
            d_max=float(data["d_max"]),
        )


def minimizer_values(start, cells, d_max):
    """Alternating-corner displacement field on a block of cells."""
    d = len(cells)
    values = np.empty(tuple(cells) + (d,))
    for j in range(d):
        idx = start[j] + np.arange(cells[j])
        comp = np.where(idx % 2 == 0, d_max, -d_max)
        shape = [1] * d
        shape[j] = cells[j]
        values[..., j] = comp.reshape(shape)
    return values


def minimizer_config(d, extent, d_max):
    """The alternating configuration omega*_n = ((-1)^{n_1} d_max, ...)."""
    start = (-extent,) * d
    cells = (2 * extent + 1,) * d
    return DisplacementConfig(
        start=start, values=minimizer_values(start, cells, d_max), d_max=d_max
    )


def corner_projection(a, d_max):
    """Nearest corner of the admissible box and the distance to it.

    Zero components are tie-broken toward +d_max.
    """
    a = np.asarray(a, dtype=float)
    corner = np.where(a >= 0.0, d_max, -d_max)
    return corner, float(np.linalg.norm(a - corner))


def nonmatching_pairs(config, periodic=False):
    """Adjacent cell pairs that are not mirror images across the shared face.

    The pair (n, n + e_j) matches when the two bubbles are reflections of
    each other through the face: omega_{n+e_j, j} = -omega_{n, j} with the
    transverse components equal.  Only corner configurations qualify; with
    ``periodic`` the block is closed into a torus and wrap-around pairs are
    checked too.
    """
    vals = config.values
    d = config.d
    d_max = config.d_max
    if not np.all(np.abs(np.abs(vals) - d_max) == 0.0):
        raise ConfigError("nonmatching_pairs requires a corner configuration")
    cells = config.cells
    out = []
    for j in range(d):
        n_pairs = cells[j] if periodic else cells[j] - 1
        for k in range(n_pairs):
            k2 = (k + 1) % cells[j]
            sl1 = [slice(None)] * d
            sl2 = [slice(None)] * d
            sl1[j] = k
            sl2[j] = k2
            v1 = vals[tuple(sl1)]
            v2 = vals[tuple(sl2)]
            mirror = v2[..., j] == -v1[..., j]
            for i in range(d):
                if i != j:
                    mirror = mirror & (v2[..., i] == v1[..., i])
            bad = np.argwhere(~np.atleast_1d(mirror))
            for b in bad:
                idx = list(b)
                idx.insert(j, k)
                n1 = tuple(config.start[a] + idx[a] for a in range(d))
                idx[j] = k2
                n2 = tuple(config.start[a] + idx[a] for a in range(d))
                out.append((n1, n2, j))
    return out


# ---------------------------------------------------------------------------
# displacement laws


@dataclasses.dataclass
class DisplacementLaw:
    """Product law for i.i.d. per-cell displacements.

    * ``corner_uniform``  - uniform on the 2^d corners (Bernoulli in d=1)
    * ``box_uniform``     - uniform on the closed box
    * ``corner_smoothed`` - corners convolved with a C^1 quartic kernel of
      radius rho folded into the box, mixed with weight eps of box_uniform,
      so the density is C^1 near the corners and the support is the full box
    * ``minimizer``       - degenerate at the alternating corner
      configuration (deterministic hook for calibration and tests)
    """

    kind: str
    d_max: float
    eps: float = 0.1
    rho: float | None = None

    def __post_init__(self):
        if self.kind not in _LAWS:
            raise ConfigError(f"unknown displacement law {self.kind!r}")
        if not (0.0 < self.d_max < 0.5):
            raise ConfigError("d_max must lie in (0, 1/2)")
        if self.kind == "corner_smoothed":
            if self.rho is None:
                self.rho = self.d_max / 8.0
            if not (0.0 < self.rho <= self.d_max / 4.0):
                raise ConfigError("smoothing radius must lie in (0, d_max/4]")
            if not (0.0 <= self.eps < 1.0):
                raise ConfigError("box mixture weight must lie in [0, 1)")

    @classmethod
    def from_name(cls, name, d_max):
        if name == "bernoulli":
            name = "corner_uniform"
        return cls(kind=name, d_max=d_max)

    def to_dict(self):
        out = {"kind": self.kind, "d_max": self.d_max}
        if self.kind == "corner_smoothed":
            out["eps"] = self.eps
            out["rho"] = self.rho
        return out

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


def _cell_rng(seed, stream, cell):
    key = tuple(int(s) for s in stream) + tuple(
        int(c) + _CELL_KEY_OFFSET for c in cell
    )
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))


def _draw_cell(law, d, rng):
    # Fixed draw counts per branch keep streams reproducible.
    dm = law.d_max
    if law.kind == "minimizer":
        raise ConfigError("the minimizer law is sampled per block, not per cell")
    if law.kind == "box_uniform":
        return rng.uniform(-dm, dm, size=d)
    signs = rng.integers(0, 2, size=d) * 2 - 1
    if law.kind == "corner_uniform":
        return signs * dm
    u = rng.uniform()
    if u < law.eps:
        return rng.uniform(-dm, dm, size=d)
    # Quartic (biweight) kernel sample via the median of five uniforms:
    # Beta(3,3) mapped to (-1, 1) has density (15/16)(1 - z^2)^2.
    z = 2.0 * np.median(rng.uniform(size=(d, 5)), axis=1) - 1.0
    return signs * (dm - law.rho * np.abs(z))


def sample_block(law, d, start, cells, seed, stream=()):
    """Sample a configuration on an arbitrary block of cells.

    Each cell draws from its own counter-based generator keyed by
    (seed, stream, absolute cell index), so results are independent of
    iteration order and of how trials are scheduled across threads.
    """
    if law.kind == "minimizer":
        values = minimizer_values(tuple(start), tuple(cells), law.d_max)
        return DisplacementConfig(start=tuple(start), values=values, d_max=law.d_max)
    values = np.empty(tuple(cells) + (d,))
    for idx in np.ndindex(*cells):
        cell = tuple(start[a] + idx[a] for a in range(d))
        rng = _cell_rng(seed, stream, cell)
        values[idx] = _draw_cell(law, d, rng)
    return DisplacementConfig(start=tuple(start), values=values, d_max=law.d_max)


def sample_config(law, d, extent, seed, stream=()):
    """Sample a configuration covering the centered box of half-extent L."""
    return sample_block(
        law, d, (-extent,) * d, (2 * extent + 1,) * d, seed, stream=stream
    )
