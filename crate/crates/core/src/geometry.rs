//! Slab geometry: strips, interfaces, outward normals and the per-interface
//! signed distance charts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The two components of the interface `Σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `y = 0`, between the porous strip and the top fluid strip.
    Top,
    /// `y = -b`, between the porous strip and the bottom fluid strip.
    Bottom,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Top, Side::Bottom];

    /// `y`-component of the normal pointing from the porous strip into the fluid.
    pub fn normal_sign(self) -> f64 {
        match self {
            Side::Top => 1.0,
            Side::Bottom => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::Top => 0,
            Side::Bottom => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Top => "top",
            Side::Bottom => "bottom",
        }
    }
}

/// The three strips of the slab.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subdomain {
    FluidTop,
    Porous,
    FluidBottom,
}

impl Subdomain {
    pub const ALL: [Subdomain; 3] = [
        Subdomain::FluidTop,
        Subdomain::Porous,
        Subdomain::FluidBottom,
    ];

    pub fn index(self) -> usize {
        match self {
            Subdomain::FluidTop => 0,
            Subdomain::Porous => 1,
            Subdomain::FluidBottom => 2,
        }
    }

    pub fn fluid_side(side: Side) -> Subdomain {
        match side {
            Side::Top => Subdomain::FluidTop,
            Side::Bottom => Subdomain::FluidBottom,
        }
    }
}

/// x-periodic slab: fluid `[0, a]`, porous `[-b, 0]`, fluid `[-b-c, -b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabGeometry {
    /// Period in `x`.
    pub period: f64,
    /// Height of the top fluid strip.
    pub fluid_top: f64,
    /// Thickness of the porous strip.
    pub porous: f64,
    /// Height of the bottom fluid strip.
    pub fluid_bottom: f64,
}

impl Default for SlabGeometry {
    fn default() -> Self {
        SlabGeometry {
            period: 2.0 * std::f64::consts::PI,
            fluid_top: 1.0,
            porous: 1.0,
            fluid_bottom: 1.0,
        }
    }
}

impl SlabGeometry {
    pub fn new(period: f64, fluid_top: f64, porous: f64, fluid_bottom: f64) -> Result<Self> {
        let g = SlabGeometry {
            period,
            fluid_top,
            porous,
            fluid_bottom,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("period", self.period),
            ("fluid_top", self.fluid_top),
            ("porous", self.porous),
            ("fluid_bottom", self.fluid_bottom),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!(
                    "geometry {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// `y`-coordinate of an interface component.
    pub fn interface_y(&self, side: Side) -> f64 {
        match side {
            Side::Top => 0.0,
            Side::Bottom => -self.porous,
        }
    }

    /// `(y_lo, y_hi)` of a strip.
    pub fn interval(&self, sub: Subdomain) -> (f64, f64) {
        match sub {
            Subdomain::FluidTop => (0.0, self.fluid_top),
            Subdomain::Porous => (-self.porous, 0.0),
            Subdomain::FluidBottom => (-self.porous - self.fluid_bottom, -self.porous),
        }
    }

    /// Distance to the interface component `side`, positive inside the porous strip.
    pub fn distance(&self, side: Side, y: f64) -> f64 {
        match side {
            Side::Top => -y,
            Side::Bottom => y + self.porous,
        }
    }

    /// Distance from a porous point to `Σ` together with the nearest component.
    pub fn distance_to_interface(&self, y: f64) -> Result<(f64, Side)> {
        if !(y >= -self.porous && y <= 0.0) {
            return Err(Error::invalid(format!(
                "point y={y} is outside the porous strip"
            )));
        }
        let dt = self.distance(Side::Top, y);
        let db = self.distance(Side::Bottom, y);
        Ok(if dt <= db {
            (dt, Side::Top)
        } else {
            (db, Side::Bottom)
        })
    }

    /// Gradient of the distance function at a porous point: the negated unit normal
    /// of the nearest interface component.
    pub fn distance_gradient(&self, y: f64) -> Result<[f64; 2]> {
        let (_, side) = self.distance_to_interface(y)?;
        Ok([0.0, -side.normal_sign()])
    }

    /// Strip containing `y` (interfaces belong to the porous strip).
    pub fn locate(&self, y: f64) -> Result<Subdomain> {
        let (lo, _) = self.interval(Subdomain::FluidBottom);
        let (_, hi) = self.interval(Subdomain::FluidTop);
        if !(y >= lo && y <= hi) {
            return Err(Error::invalid(format!(
                "point y={y} is outside the slab [{lo}, {hi}]"
            )));
        }
        Ok(if y > 0.0 {
            Subdomain::FluidTop
        } else if y < -self.porous {
            Subdomain::FluidBottom
        } else {
            Subdomain::Porous
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_charts_meet_in_the_middle() {
        let g = SlabGeometry::default();
        let (d, side) = g.distance_to_interface(-0.2).unwrap();
        assert!((d - 0.2).abs() < 1e-15);
        assert_eq!(side, Side::Top);
        let (d, side) = g.distance_to_interface(-0.9).unwrap();
        assert!((d - 0.1).abs() < 1e-15);
        assert_eq!(side, Side::Bottom);
        assert_eq!(g.distance_gradient(-0.9).unwrap(), [0.0, 1.0]);
        assert!(g.distance_to_interface(0.3).is_err());
    }

    #[test]
    fn rejects_degenerate_strips() {
        assert!(SlabGeometry::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(SlabGeometry::new(f64::NAN, 1.0, 1.0, 1.0).is_err());
    }
}
