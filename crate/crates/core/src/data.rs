//! Problem data: volume forces as exponential-polynomial profiles per Fourier mode
//! and interface data as Fourier coefficients per interface component.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{ExpPoly, ModeSet};
use crate::geometry::{Side, SlabGeometry, Subdomain};
use crate::C64;

/// Vector volume field: `[x, y]` profiles for each mode.
pub type VolumeModes = Vec<[ExpPoly; 2]>;
/// Fluid volume field: `[side][x, y]` profiles for each mode (`side` selects the
/// top or bottom fluid strip).
pub type FluidModes = Vec<[[ExpPoly; 2]; 2]>;
/// Vector interface field: `[side][x, y]` coefficients for each mode.
pub type InterfaceModes = Vec<[[C64; 2]; 2]>;

/// Data of the transmission problem.
///
/// `g_minus` acts in the porous strip, `g_plus` in the fluid strips (one profile
/// per strip), `h` and `l` are the vector interface data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemData {
    pub modes: ModeSet,
    pub g_minus: VolumeModes,
    pub g_plus: FluidModes,
    pub h: InterfaceModes,
    pub l: InterfaceModes,
}

/// Which data field to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataField {
    GMinus,
    GPlus,
    H,
    L,
}

impl ProblemData {
    pub fn zero(modes: ModeSet) -> Self {
        let n = modes.len();
        ProblemData {
            modes,
            g_minus: vec![[ExpPoly::zero(), ExpPoly::zero()]; n],
            g_plus: vec![
                [
                    [ExpPoly::zero(), ExpPoly::zero()],
                    [ExpPoly::zero(), ExpPoly::zero()]
                ];
                n
            ],
            h: vec![[[C64::new(0.0, 0.0); 2]; 2]; n],
            l: vec![[[C64::new(0.0, 0.0); 2]; 2]; n],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.modes.len();
        if self.g_minus.len() != n
            || self.g_plus.len() != n
            || self.h.len() != n
            || self.l.len() != n
        {
            return Err(Error::invalid("data arrays do not match the mode set"));
        }
        for p in self
            .g_minus
            .iter()
            .chain(self.g_plus.iter().flatten())
            .flatten()
        {
            p.validate()?;
        }
        for v in self.h.iter().chain(&self.l).flatten().flatten() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::invalid("non-finite interface datum"));
            }
        }
        Ok(())
    }

    /// Volume profiles acting in strip `sub` for mode index `i`.
    pub fn volume(&self, sub: Subdomain, i: usize) -> &[ExpPoly; 2] {
        match sub {
            Subdomain::Porous => &self.g_minus[i],
            Subdomain::FluidTop => &self.g_plus[i][0],
            Subdomain::FluidBottom => &self.g_plus[i][1],
        }
    }

    /// Largest deviation from conjugate symmetry `f_{-k} = conj(f_k)`, sampled at
    /// the interface and strip ends.
    pub fn conjugate_symmetry_defect(&self, geom: &SlabGeometry) -> f64 {
        let mut worst: f64 = 0.0;
        let ys: Vec<f64> = Subdomain::ALL
            .iter()
            .flat_map(|&s| {
                let (lo, hi) = geom.interval(s);
                [lo, 0.5 * (lo + hi), hi]
            })
            .collect();
        for i in 0..self.modes.len() {
            let j = self.modes.mirror(i);
            for c in 0..2 {
                for &y in &ys {
                    let pairs = [
                        (&self.g_minus[i][c], &self.g_minus[j][c]),
                        (&self.g_plus[i][0][c], &self.g_plus[j][0][c]),
                        (&self.g_plus[i][1][c], &self.g_plus[j][1][c]),
                    ];
                    for (a, b) in pairs {
                        worst = worst.max((a.eval(y) - b.eval(y).conj()).norm());
                    }
                }
                for s in 0..2 {
                    worst = worst.max((self.h[i][s][c] - self.h[j][s][c].conj()).norm());
                    worst = worst.max((self.l[i][s][c] - self.l[j][s][c].conj()).norm());
                }
            }
        }
        worst
    }

    /// Sum of the squared `L²` norm of the volume data (over the slab) and of the
    /// interface data (over `Σ`), computed with the supplied quadrature per strip.
    pub fn squared_norm(
        &self,
        geom: &SlabGeometry,
        quad: &dyn Fn(Subdomain) -> (Vec<f64>, Vec<f64>),
    ) -> f64 {
        let l = geom.period;
        let mut total = 0.0;
        for sub in Subdomain::ALL {
            let (ys, ws) = quad(sub);
            for i in 0..self.modes.len() {
                for p in self.volume(sub, i) {
                    total += l * ys
                        .iter()
                        .zip(&ws)
                        .map(|(&y, &w)| w * p.eval(y).norm_sqr())
                        .sum::<f64>();
                }
            }
        }
        for m in 0..self.modes.len() {
            for s in 0..2 {
                for c in 0..2 {
                    total += l * (self.h[m][s][c].norm_sqr() + self.l[m][s][c].norm_sqr());
                }
            }
        }
        total
    }
}

/// Sums the Fourier series of a data field at `(x, y)`.
///
/// Volume fields require `y` inside their strip (`g_minus`: porous, `g_plus`:
/// either fluid strip); interface fields require `y` on `Σ`.
pub fn evaluate_field(
    data: &ProblemData,
    geom: &SlabGeometry,
    field: DataField,
    point: [f64; 2],
) -> Result<[C64; 2]> {
    let [x, y] = point;
    let sum_modes = |f: &dyn Fn(usize) -> [C64; 2]| {
        let mut out = [C64::new(0.0, 0.0); 2];
        for (i, k) in data.modes.modes().enumerate() {
            let e = C64::from_polar(1.0, ModeSet::wavenumber(k, geom.period) * x);
            let v = f(i);
            out[0] += v[0] * e;
            out[1] += v[1] * e;
        }
        out
    };
    match field {
        DataField::GMinus | DataField::GPlus => {
            let located = geom.locate(y)?;
            let sub = match field {
                DataField::GMinus if located == Subdomain::Porous => Subdomain::Porous,
                DataField::GPlus if located != Subdomain::Porous => located,
                DataField::GPlus if y == geom.interface_y(Side::Top) => Subdomain::FluidTop,
                DataField::GPlus if y == geom.interface_y(Side::Bottom) => Subdomain::FluidBottom,
                _ => {
                    return Err(Error::invalid(format!(
                        "point y={y} is outside the support of the field"
                    )))
                }
            };
            Ok(sum_modes(&|i| {
                let f = data.volume(sub, i);
                [f[0].eval(y), f[1].eval(y)]
            }))
        }
        DataField::H | DataField::L => {
            let side = if y == geom.interface_y(Side::Top) {
                Side::Top
            } else if y == geom.interface_y(Side::Bottom) {
                Side::Bottom
            } else {
                return Err(Error::invalid(format!(
                    "point y={y} is not on the interface"
                )));
            };
            let f = if field == DataField::H {
                &data.h
            } else {
                &data.l
            };
            Ok(sum_modes(&|i| f[i][side.index()]))
        }
    }
}

/// Mutable access to entries `i` and `j != i` (`None` when `i == j`).
fn pair_mut<T>(v: &mut [T], i: usize, j: usize) -> (&mut T, Option<&mut T>) {
    if i == j {
        return (&mut v[i], None);
    }
    if i < j {
        let (a, b) = v.split_at_mut(j);
        (&mut a[i], Some(&mut b[0]))
    } else {
        let (a, b) = v.split_at_mut(i);
        (&mut b[0], Some(&mut a[j]))
    }
}

/// Options for [`random_data`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomDataOptions {
    /// Largest |k| carrying nonzero data.
    pub active_modes: usize,
    /// Number of exponential-polynomial terms per profile.
    pub terms: usize,
    /// Overall amplitude.
    pub amplitude: f64,
}

impl Default for RandomDataOptions {
    fn default() -> Self {
        RandomDataOptions {
            active_modes: 2,
            terms: 2,
            amplitude: 1.0,
        }
    }
}

/// Smooth, real-valued random data (conjugate-symmetric coefficients) from a seed.
pub fn random_data(seed: u64, modes: ModeSet, opts: RandomDataOptions) -> ProblemData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = ProblemData::zero(modes);
    let active = opts.active_modes.min(modes.n_max) as i64;
    for k in 0..=active {
        let i = modes.index(k).unwrap();
        let j = modes.index(-k).unwrap();
        let amp = opts.amplitude / (1.0 + (k * k) as f64);
        let coef = |rng: &mut ChaCha8Rng| {
            let re = rng.gen_range(-1.0..1.0);
            let im = if k == 0 {
                0.0
            } else {
                rng.gen_range(-1.0..1.0)
            };
            C64::new(re, im) * amp
        };
        for field in [0, 1, 2] {
            for c in 0..2 {
                let mut p = ExpPoly::zero();
                for _ in 0..opts.terms {
                    let power = rng.gen_range(0..2u32);
                    let rate = C64::new(rng.gen_range(-1.0..1.0), 0.0);
                    p = p.add(&ExpPoly::term(coef(&mut rng), power, rate));
                }
                let (pi, pj) = match field {
                    0 => {
                        let (a, b) = pair_mut(&mut data.g_minus, i, j);
                        (&mut a[c], b.map(|b| &mut b[c]))
                    }
                    f => {
                        let (a, b) = pair_mut(&mut data.g_plus, i, j);
                        (&mut a[f - 1][c], b.map(|b| &mut b[f - 1][c]))
                    }
                };
                if let Some(pj) = pj {
                    *pj = p.conj();
                }
                *pi = p;
            }
        }
        for s in 0..2 {
            for c in 0..2 {
                let hv = coef(&mut rng);
                let lv = coef(&mut rng);
                data.h[i][s][c] = hv;
                data.h[j][s][c] = hv.conj();
                data.l[i][s][c] = lv;
                data.l[j][s][c] = lv.conj();
            }
        }
    }
    data
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_data_is_real_valued() {
        let geom = SlabGeometry::default();
        let data = random_data(7, ModeSet::new(4), RandomDataOptions::default());
        assert!(data.conjugate_symmetry_defect(&geom) == 0.0);
        for &(x, y) in &[(0.3, -0.4), (1.9, -0.99), (5.0, 0.0)] {
            let v = evaluate_field(&data, &geom, DataField::GMinus, [x, y]).unwrap();
            assert!(v[0].im.abs() <= 1e-12 * v[0].norm().max(1.0));
            assert!(v[1].im.abs() <= 1e-12 * v[1].norm().max(1.0));
        }
    }

    #[test]
    fn field_support_is_enforced() {
        let geom = SlabGeometry::default();
        let data = random_data(1, ModeSet::new(2), RandomDataOptions::default());
        assert!(evaluate_field(&data, &geom, DataField::GMinus, [0.0, 0.5]).is_err());
        assert!(evaluate_field(&data, &geom, DataField::GPlus, [0.0, -0.5]).is_err());
        assert!(evaluate_field(&data, &geom, DataField::H, [0.0, -0.5]).is_err());
        assert!(evaluate_field(&data, &geom, DataField::L, [0.0, -1.0]).is_ok());
        assert!(evaluate_field(&data, &geom, DataField::GPlus, [0.0, 5.0]).is_err());
    }
}
