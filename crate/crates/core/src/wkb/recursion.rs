//! Order-by-order construction of the expansion.
//!
//! At order `j` and each interface component, with `s = n_y` and layer
//! variable `z = d/√ε`:
//!
//! * `p̃_j = -∫_z^∞ [-∂_zz Ñ_{j-1} + κ Ñ_{j-1} - (∇d·∇)p̃_{j-1} - 2(∇d·∇)∂_z Ñ_{j-2}
//!   - Δd ∂_z Ñ_{j-2} - Δ Ñ_{j-3}]`,
//! * `Ñ_j = -∫_z^∞ [∂_x T̃_{j-1} - (∇d·∇) Ñ_{j-1}]` (layer divergence chain),
//! * the outer pair solves the Stokes–Darcy problem with porous force
//!   `δ_{j0} g⁻ + Δv̄⁻_{j-2}` and interface data collecting all lower-order traces,
//! * `T̃_j` solves `-∂_zz T̃ + κ T̃ = -∂_x p̃_j + 2(∇d·∇)∂_z T̃_{j-1} + Δd ∂_z T̃_{j-1}
//!   + Δ T̃_{j-2}` with the trace fixed by the tangential slip law.
//!
//! The outer pressure of order `j-2` is shifted by a global constant so that the
//! normal-jump datum of order `j` has zero mean over `Σ`.

use crate::bl::{
    bl_dz, bl_ode_solve, bl_tail_integral, BLProfile, CoeffField, Cutoff, DistanceHooks, FlatHooks,
    ProfileRole,
};
use crate::data::ProblemData;
use crate::error::{Error, Result};
use crate::field::SolutionPair;
use crate::fourier::ModeSet;
use crate::geometry::{Side, SlabGeometry, Subdomain};
use crate::grids::{Discretization, SlabGrids};
use crate::params::PhysicalParams;
use crate::solvers::{sample_volume, solve_elementary, ElementarySpec};
use crate::C64;

use super::bundle::{ExpansionBundle, LayerTerm, OrderTerm, OuterInterfaceData};

/// Highest order the recursion builds; degree growth and cost stay bounded below it.
pub const MAX_EXPANSION_ORDER: usize = 6;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `Σ c_k p_k`, skipping structural zeros; structural zero if every part is.
fn combine(
    side: Side,
    role: ProfileRole,
    rate: f64,
    parts: &[(f64, &BLProfile)],
) -> Result<BLProfile> {
    let mut acc = BLProfile::zero(side, role, rate);
    for (c, p) in parts {
        if p.is_structural_zero() {
            continue;
        }
        acc = acc.add(&p.scale(re(*c)).with_role(role))?;
    }
    Ok(acc)
}

struct Ops<'a> {
    modes: ModeSet,
    period: f64,
    hooks: &'a dyn DistanceHooks,
}

impl Ops<'_> {
    fn dn(&self, p: &BLProfile) -> BLProfile {
        p.map_coeffs(|c| self.hooks.grad_d_dot_grad(c))
    }
    fn lap_d(&self, p: &BLProfile) -> BLProfile {
        if p.is_structural_zero() {
            return p.clone();
        }
        match self.hooks.lap_d_times(&p.coeffs[0]) {
            None => BLProfile::zero(p.side, p.role, p.rate),
            Some(_) => p.map_coeffs(|c| self.hooks.lap_d_times(c).unwrap()),
        }
    }
    fn dx(&self, p: &BLProfile) -> BLProfile {
        p.map_coeffs(|c| c.dx(self.modes, self.period))
    }
    fn lap(&self, p: &BLProfile) -> BLProfile {
        p.map_coeffs(|c| c.lap(self.modes, self.period))
    }
    /// Mode-`i` value of a profile on `Σ` at `z = 0`.
    fn trace(&self, p: &BLProfile, i: usize) -> C64 {
        p.coeffs.first().map_or(ZERO, |c| c.trace()[i])
    }
}

/// Builds order 0 of the expansion.
pub fn build_order0(
    data: &ProblemData,
    geom: &SlabGeometry,
    params: &PhysicalParams,
    disc: &Discretization,
) -> Result<ExpansionBundle> {
    geom.validate()?;
    params.validate()?;
    data.validate()?;
    if data.modes != disc.modes {
        return Err(Error::invalid(
            "data mode set differs from the discretization",
        ));
    }
    let mut bundle = ExpansionBundle {
        geometry: *geom,
        params: *params,
        discretization: *disc,
        cutoff: Cutoff::for_thickness(geom.porous),
        data: data.clone(),
        orders: Vec::new(),
    };
    step(&mut bundle, 0, &FlatHooks)?;
    Ok(bundle)
}

/// Appends order 1.
pub fn build_order1(bundle: &mut ExpansionBundle) -> Result<()> {
    build_orderj(bundle, 1)
}

/// Appends order `j`; orders `0..j` must already be present.
pub fn build_orderj(bundle: &mut ExpansionBundle, j: usize) -> Result<()> {
    build_orderj_with_hooks(bundle, j, &FlatHooks)
}

/// [`build_orderj`] with explicit distance-function hooks.
pub fn build_orderj_with_hooks(
    bundle: &mut ExpansionBundle,
    j: usize,
    hooks: &dyn DistanceHooks,
) -> Result<()> {
    if bundle.orders.len() != j {
        return Err(Error::invalid(format!(
            "order {j} requested but the bundle holds orders 0..{}",
            bundle.orders.len()
        )));
    }
    if j > MAX_EXPANSION_ORDER {
        return Err(Error::invalid(format!(
            "order {j} exceeds the maximum {MAX_EXPANSION_ORDER}"
        )));
    }
    step(bundle, j, hooks)
}

/// Builds all orders `0..=order`.
pub fn build_bundle(
    data: &ProblemData,
    geom: &SlabGeometry,
    params: &PhysicalParams,
    disc: &Discretization,
    order: usize,
) -> Result<ExpansionBundle> {
    let mut b = build_order0(data, geom, params, disc)?;
    for j in 1..=order {
        build_orderj(&mut b, j)?;
    }
    Ok(b)
}

fn layer_of(b: &ExpansionBundle, j: isize, side: Side, rate: f64) -> LayerTerm {
    if j < 0 {
        LayerTerm::zero(side, rate)
    } else {
        b.orders[j as usize].layers[side.index()].clone()
    }
}

fn check_degree(p: &BLProfile, bound: isize, what: &str, j: usize) -> Result<()> {
    let ok = match p.degree() {
        None => true,
        Some(d) => (d as isize) <= bound,
    };
    if !ok {
        return Err(Error::internal(format!(
            "{what} of order {j} has degree {:?}, above the bound {bound}",
            p.degree()
        )));
    }
    Ok(())
}

fn step(b: &mut ExpansionBundle, j: usize, hooks: &dyn DistanceHooks) -> Result<()> {
    let modes = b.modes();
    let nm = modes.len();
    let geom = b.geometry;
    let params = b.params;
    let rate = params.decay_rate();
    let kappa = params.kappa;
    let ops = Ops {
        modes,
        period: geom.period,
        hooks,
    };
    let ji = j as isize;

    // Layer pressure and normal velocity of order j.
    let mut layers = [
        LayerTerm::zero(Side::Top, rate),
        LayerTerm::zero(Side::Bottom, rate),
    ];
    for side in Side::BOTH {
        let l1 = layer_of(b, ji - 1, side, rate);
        let l2 = layer_of(b, ji - 2, side, rate);
        let l3 = layer_of(b, ji - 3, side, rate);
        let lay = &mut layers[side.index()];
        if j >= 2 {
            let n1 = &l1.normal;
            let dzz = bl_dz(&bl_dz(n1));
            let dz2 = bl_dz(&l2.normal);
            let src = combine(
                side,
                ProfileRole::Pressure,
                rate,
                &[
                    (-1.0, &dzz),
                    (kappa, n1),
                    (-1.0, &ops.dn(&l1.pressure)),
                    (-2.0, &ops.dn(&dz2)),
                    (-1.0, &ops.lap_d(&dz2)),
                    (-1.0, &ops.lap(&l3.normal)),
                ],
            )?;
            lay.pressure = bl_tail_integral(&src)
                .scale(re(-1.0))
                .with_role(ProfileRole::Pressure);
        }
        if j >= 1 {
            let div = combine(
                side,
                ProfileRole::Normal,
                rate,
                &[(1.0, &ops.dx(&l1.tangential)), (-1.0, &ops.dn(&l1.normal))],
            )?;
            lay.normal = bl_tail_integral(&div)
                .scale(re(-1.0))
                .with_role(ProfileRole::Normal);
        }
    }

    // Interface data of the outer problem.
    let mut h = vec![[ZERO; 2]; nm];
    let mut l = vec![[[ZERO; 2]; 2]; nm];
    let mu = params.mu;
    let beta = params.beta;
    for side in Side::BOTH {
        let si = side.index();
        let s = side.normal_sign();
        let l1 = layer_of(b, ji - 1, side, rate);
        let l2 = layer_of(b, ji - 2, side, rate);
        let lay = &layers[si];
        let dz_t1 = bl_dz(&l1.tangential);
        let dz_n1 = bl_dz(&l1.normal);
        let dn_t2 = ops.dn(&l2.tangential);
        let dn_n2 = ops.dn(&l2.normal);
        for i in 0..nm {
            let xi = ModeSet::wavenumber(modes.mode(i), geom.period);
            let ixi = C64::new(0.0, xi);
            let nj = ops.trace(&lay.normal, i);
            let pj = ops.trace(&lay.pressure, i);
            let mut lx =
                -ops.trace(&dz_t1, i) - ops.trace(&dn_t2, i) + ixi * ops.trace(&l2.normal, i);
            let mut ly = -2.0 * s * ops.trace(&dz_n1, i) - 2.0 * s * ops.trace(&dn_n2, i)
                + s * (0.5 * beta * nj - pj);
            let mut hj = nj;
            if j >= 2 {
                let tr = b.orders[j - 2].outer.interface_trace(i, side);
                lx += s * (tr.minus.du + ixi * tr.minus.v);
                ly += 2.0 * s * tr.minus.dv;
                hj += 2.0 * mu * tr.plus.dv
                    - tr.plus.p
                    - 0.25 * beta * (s * tr.plus.v + s * tr.minus.v + ops.trace(&l2.normal, i));
            }
            if j == 0 {
                lx += b.data.l[i][si][0];
                ly += b.data.l[i][si][1];
            }
            if j == 2 {
                hj -= s * (b.data.h[i][si][1] + 0.5 * b.data.l[i][si][1]);
            }
            l[i][si] = [lx, ly];
            h[i][si] = hj;
        }
    }
    if j >= 2 {
        let i0 = modes.index(0).unwrap();
        let c = 0.5 * (h[i0][0] + h[i0][1]);
        h[i0][0] -= c;
        h[i0][1] -= c;
        let prev = &mut b.orders[j - 2];
        prev.outer.shift_pressure(c);
        prev.pressure_shift += c;
    }

    // Outer problem.
    let grids = SlabGrids::uniform(&geom, &b.discretization)?;
    let mut spec = ElementarySpec::zero(geom, modes, grids.clone());
    for i in 0..nm {
        let xi = ModeSet::wavenumber(modes.mode(i), geom.period);
        let mut gm = [
            vec![ZERO; grids.porous.len()],
            vec![ZERO; grids.porous.len()],
        ];
        if j == 0 {
            gm = sample_volume(&b.data.g_minus[i], &grids.porous);
            spec.g_plus_top[i] = sample_volume(&b.data.g_plus[i][0], &grids.fluid_top);
            spec.g_plus_bottom[i] = sample_volume(&b.data.g_plus[i][1], &grids.fluid_bottom);
        }
        if j >= 2 {
            let prev = b.orders[j - 2].outer.fields[i].strip(Subdomain::Porous);
            for (c, f) in [&prev.u, &prev.v].into_iter().enumerate() {
                let d2 = grids.porous.differentiate2(f);
                for (k, (&a, &v)) in d2.iter().zip(f.iter()).enumerate() {
                    gm[c][k] += a - v * (xi * xi);
                }
            }
        }
        spec.g_minus[i] = gm;
    }
    spec.h = h.clone();
    spec.l = l.clone();
    let outer = solve_elementary(&spec, &params)?;

    // Tangential layer velocity.
    for side in Side::BOTH {
        let si = side.index();
        let s = side.normal_sign();
        let l1 = layer_of(b, ji - 1, side, rate);
        let l2 = layer_of(b, ji - 2, side, rate);
        let seed: Vec<C64> = (0..nm)
            .map(|i| {
                let xi = ModeSet::wavenumber(modes.mode(i), geom.period);
                let tr = outer.interface_trace(i, side);
                let mut w = (tr.plus.u - tr.minus.u)
                    - (mu / params.alpha) * s * (tr.plus.du + C64::new(0.0, xi) * tr.plus.v);
                if j == 0 {
                    w += (b.data.h[i][si][0] + 0.5 * b.data.l[i][si][0]) / params.alpha;
                }
                w
            })
            .collect();
        let dz_t1 = bl_dz(&l1.tangential);
        let rhs = combine(
            side,
            ProfileRole::Tangential,
            rate,
            &[
                (-1.0, &ops.dx(&layers[si].pressure)),
                (2.0, &ops.dn(&dz_t1)),
                (1.0, &ops.lap_d(&dz_t1)),
                (1.0, &ops.lap(&l2.tangential)),
            ],
        )?;
        layers[si].tangential =
            bl_ode_solve(&rhs, &CoeffField::extension(&seed), ProfileRole::Tangential)?;
    }

    for lay in layers.iter_mut() {
        for p in [&mut lay.tangential, &mut lay.normal, &mut lay.pressure] {
            *p = std::mem::replace(p, BLProfile::zero(p.side, p.role, p.rate)).pruned();
        }
        check_degree(&lay.normal, ji - 1, "normal layer velocity", j)?;
        check_degree(&lay.tangential, ji, "tangential layer velocity", j)?;
        check_degree(&lay.pressure, ji - 2, "layer pressure", j)?;
    }

    b.orders.push(OrderTerm {
        order: j,
        outer,
        layers,
        interface: OuterInterfaceData { h, l },
        pressure_shift: ZERO,
    });
    Ok(())
}

/// Outer solution of an order (convenience accessor).
pub fn outer_of(b: &ExpansionBundle, j: usize) -> Option<&SolutionPair> {
    b.orders.get(j).map(|o| &o.outer)
}
