//! Per-order residuals of the identities the recursion is built to satisfy.

use serde::{Deserialize, Serialize};

use crate::bl::{bl_dz, DistanceHooks, FlatHooks};
use crate::fourier::ModeSet;
use crate::geometry::Side;
use crate::C64;

use super::bundle::ExpansionBundle;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderResiduals {
    pub order: usize,
    /// Largest coefficient of `∂_z Ñ_{j+1} - ∂_x T̃_j + (∇d·∇) Ñ_j`
    /// relative to the largest term; `None` for the last order.
    pub divergence_chain: Option<f64>,
    /// Largest residual of the tangential slip law on `Σ`.
    pub slip_law: f64,
    /// `|h_top + h_bottom|` of mode 0 (zero mean of the normal-jump datum).
    pub gauge: f64,
    /// Degrees `(T̃, Ñ, p̃)` per interface component.
    #[allow(clippy::type_complexity)]
    pub degrees: [(Option<usize>, Option<usize>, Option<usize>); 2],
}

/// Residuals of every order of a flat-interface bundle.
pub fn residual_summary(b: &ExpansionBundle) -> Vec<OrderResiduals> {
    let modes = b.modes();
    let nm = modes.len();
    let period = b.geometry.period;
    let i0 = modes.index(0).unwrap();
    let degrees = b.degree_table();
    b.orders
        .iter()
        .enumerate()
        .map(|(j, o)| {
            let divergence_chain = b.orders.get(j + 1).map(|next| {
                let mut worst: f64 = 0.0;
                for side in Side::BOTH {
                    let lay = o.layer(side);
                    let role = next.layer(side).normal.role;
                    let rhs = lay
                        .tangential
                        .map_coeffs(|c| c.dx(modes, period))
                        .with_role(role)
                        .add(
                            &lay.normal
                                .map_coeffs(|c| FlatHooks.grad_d_dot_grad(c))
                                .scale(C64::new(-1.0, 0.0))
                                .with_role(role),
                        )
                        .expect("profiles of one component are compatible");
                    let lhs = bl_dz(&next.layer(side).normal);
                    let diff = lhs
                        .add(&rhs.scale(C64::new(-1.0, 0.0)))
                        .expect("profiles of one component are compatible");
                    worst = worst.max(diff.max_coeff() / rhs.max_coeff().max(1.0));
                }
                worst
            });
            let mut slip_law: f64 = 0.0;
            for side in Side::BOTH {
                let si = side.index();
                let s = side.normal_sign();
                let t0 = o.layer(side).tangential.trace_z0(nm).trace();
                for (i, t) in t0.iter().enumerate() {
                    let xi = ModeSet::wavenumber(modes.mode(i), period);
                    let tr = o.outer.interface_trace(i, side);
                    let mut res = b.params.alpha * (t - (tr.plus.u - tr.minus.u))
                        + b.params.mu * s * (tr.plus.du + C64::new(0.0, xi) * tr.plus.v);
                    if j == 0 {
                        res -= b.data.h[i][si][0] + 0.5 * b.data.l[i][si][0];
                    }
                    slip_law = slip_law.max(res.norm());
                }
            }
            OrderResiduals {
                order: j,
                divergence_chain,
                slip_law,
                gauge: (o.interface.h[i0][0] + o.interface.h[i0][1]).norm(),
                degrees: degrees[j],
            }
        })
        .collect()
}
