//! Discrete solutions: per-mode `(u, v, p)` profiles on the strip grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::ModeSet;
use crate::geometry::{Side, SlabGeometry, Subdomain};
use crate::grids::SlabGrids;
use crate::C64;

/// Per-mode samples of velocity, pressure and `y`-derivatives of the velocity
/// at a list of points.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSamples {
    pub u: Vec<C64>,
    pub v: Vec<C64>,
    pub p: Vec<C64>,
    pub du: Vec<C64>,
    pub dv: Vec<C64>,
}

impl ProfileSamples {
    pub fn zeros(n: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); n];
        ProfileSamples {
            u: z.clone(),
            v: z.clone(),
            p: z.clone(),
            du: z.clone(),
            dv: z,
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// `self - other`, pointwise.
    pub fn sub(&self, other: &ProfileSamples) -> Result<ProfileSamples> {
        if self.len() != other.len() {
            return Err(Error::invalid("sample lengths differ"));
        }
        let d = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| x - y).collect();
        Ok(ProfileSamples {
            u: d(&self.u, &other.u),
            v: d(&self.v, &other.v),
            p: d(&self.p, &other.p),
            du: d(&self.du, &other.du),
            dv: d(&self.dv, &other.dv),
        })
    }
}

/// Profiles of one strip for one mode, sampled at the collocation nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripField {
    pub u: Vec<C64>,
    pub v: Vec<C64>,
    pub p: Vec<C64>,
}

impl StripField {
    pub fn zeros(n: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); n];
        StripField {
            u: z.clone(),
            v: z.clone(),
            p: z,
        }
    }

    pub fn conj(&self) -> Self {
        let c = |v: &Vec<C64>| v.iter().map(|z| z.conj()).collect();
        StripField {
            u: c(&self.u),
            v: c(&self.v),
            p: c(&self.p),
        }
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }
}

/// All three strips for one Fourier mode, indexed by [`Subdomain::index`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeField {
    pub strips: [StripField; 3],
}

impl ModeField {
    pub fn strip(&self, sub: Subdomain) -> &StripField {
        &self.strips[sub.index()]
    }

    pub fn strip_mut(&mut self, sub: Subdomain) -> &mut StripField {
        &mut self.strips[sub.index()]
    }

    pub fn conj(&self) -> Self {
        ModeField {
            strips: [
                self.strips[0].conj(),
                self.strips[1].conj(),
                self.strips[2].conj(),
            ],
        }
    }
}

/// How the pressure level of a solution was fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PressureGauge {
    /// The equations determine the pressure uniquely.
    Determined,
    /// Mean of the porous pressure set to zero.
    PorousMeanZero,
    /// Porous-mean-zero pressure subsequently shifted by a constant.
    Shifted { shift: C64 },
}

/// Velocity and pressure on the whole slab.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionPair {
    pub geometry: SlabGeometry,
    pub modes: ModeSet,
    pub grids: SlabGrids,
    pub fields: Vec<ModeField>,
    pub gauge: PressureGauge,
}

/// Values and normal-coordinate derivatives at one interface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointTrace {
    pub u: C64,
    pub v: C64,
    pub du: C64,
    pub dv: C64,
    pub p: C64,
}

/// Fluid-side and porous-side traces at one interface component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceTrace {
    pub plus: PointTrace,
    pub minus: PointTrace,
}

impl SolutionPair {
    pub fn zeros(geometry: SlabGeometry, modes: ModeSet, grids: SlabGrids) -> Self {
        let fields = (0..modes.len())
            .map(|_| ModeField {
                strips: [
                    StripField::zeros(grids.fluid_top.len()),
                    StripField::zeros(grids.porous.len()),
                    StripField::zeros(grids.fluid_bottom.len()),
                ],
            })
            .collect();
        SolutionPair {
            geometry,
            modes,
            grids,
            fields,
            gauge: PressureGauge::Determined,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.fields.len() != self.modes.len() {
            return Err(Error::invalid(
                "solution mode count does not match its mode set",
            ));
        }
        for f in &self.fields {
            for sub in Subdomain::ALL {
                let n = self.grids.get(sub).len();
                let s = f.strip(sub);
                if s.u.len() != n || s.v.len() != n || s.p.len() != n {
                    return Err(Error::invalid(format!(
                        "profile length mismatch in {sub:?}"
                    )));
                }
            }
        }
        self.grids.check_geometry(&self.geometry)
    }

    pub fn wavenumber(&self, index: usize) -> f64 {
        ModeSet::wavenumber(self.modes.mode(index), self.geometry.period)
    }

    fn point_trace(&self, index: usize, sub: Subdomain, node: usize) -> PointTrace {
        let g = self.grids.get(sub);
        let s = self.fields[index].strip(sub);
        let drow = g.d1.row(node);
        let dot = |v: &[C64]| -> C64 { drow.iter().zip(v).map(|(&a, &x)| x * a).sum() };
        PointTrace {
            u: s.u[node],
            v: s.v[node],
            du: dot(&s.u),
            dv: dot(&s.v),
            p: s.p[node],
        }
    }

    /// Traces at the interface component `side` for mode index `index`.
    pub fn interface_trace(&self, index: usize, side: Side) -> InterfaceTrace {
        let np = self.grids.porous.len();
        match side {
            Side::Top => InterfaceTrace {
                plus: self.point_trace(index, Subdomain::FluidTop, 0),
                minus: self.point_trace(index, Subdomain::Porous, np - 1),
            },
            Side::Bottom => InterfaceTrace {
                plus: self.point_trace(
                    index,
                    Subdomain::FluidBottom,
                    self.grids.fluid_bottom.len() - 1,
                ),
                minus: self.point_trace(index, Subdomain::Porous, 0),
            },
        }
    }

    /// Adds the constant `c` to the pressure of mode 0 in all strips.
    pub fn shift_pressure(&mut self, c: C64) {
        let i0 = self.modes.index(0).unwrap();
        for s in self.fields[i0].strips.iter_mut() {
            for p in s.p.iter_mut() {
                *p += c;
            }
        }
        self.gauge = match self.gauge {
            PressureGauge::Shifted { shift } => PressureGauge::Shifted { shift: shift + c },
            _ => PressureGauge::Shifted { shift: c },
        };
    }

    /// Mean of the porous pressure over the porous strip (mode 0 coefficient).
    pub fn porous_pressure_mean(&self) -> C64 {
        let i0 = self.modes.index(0).unwrap();
        let g = &self.grids.porous;
        g.integrate(&self.fields[i0].strip(Subdomain::Porous).p) / self.geometry.porous
    }

    /// Evaluates `(u, v, p)` of one mode at `y` by barycentric interpolation.
    pub fn mode_value(&self, index: usize, y: f64) -> Result<[C64; 3]> {
        let sub = self.geometry.locate(y)?;
        let g = self.grids.get(sub);
        let m = g.interpolation_matrix(&[y])?;
        let s = self.fields[index].strip(sub);
        Ok([m.apply(&s.u)[0], m.apply(&s.v)[0], m.apply(&s.p)[0]])
    }

    /// Per-mode samples at the points `ys` of strip `sub`, by barycentric
    /// interpolation of the nodal values and of their collocation derivatives.
    pub fn sample(&self, sub: Subdomain, ys: &[f64]) -> Result<Vec<ProfileSamples>> {
        let g = self.grids.get(sub);
        let m = g.interpolation_matrix(ys)?;
        Ok(self
            .fields
            .iter()
            .map(|f| {
                let s = f.strip(sub);
                ProfileSamples {
                    u: m.apply(&s.u),
                    v: m.apply(&s.v),
                    p: m.apply(&s.p),
                    du: m.apply(&g.differentiate(&s.u)),
                    dv: m.apply(&g.differentiate(&s.v)),
                }
            })
            .collect())
    }

    /// Evaluates velocity and pressure at `(x, y)` by summing the Fourier series.
    pub fn evaluate(&self, point: [f64; 2]) -> Result<([C64; 2], C64)> {
        let [x, y] = point;
        let mut vel = [C64::new(0.0, 0.0); 2];
        let mut p = C64::new(0.0, 0.0);
        for i in 0..self.modes.len() {
            let e = C64::from_polar(1.0, self.wavenumber(i) * x);
            let [u, v, q] = self.mode_value(i, y)?;
            vel[0] += u * e;
            vel[1] += v * e;
            p += q * e;
        }
        Ok((vel, p))
    }

    /// Largest deviation from `f_{-k} = conj(f_k)` over all stored profiles.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.modes.len() {
            let j = self.modes.mirror(i);
            for (a, b) in self.fields[i].strips.iter().zip(&self.fields[j].strips) {
                for (x, y) in [(&a.u, &b.u), (&a.v, &b.v), (&a.p, &b.p)] {
                    for (p, q) in x.iter().zip(y) {
                        worst = worst.max((p - q.conj()).norm());
                    }
                }
            }
        }
        worst
    }
}
