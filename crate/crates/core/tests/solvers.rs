use bwkb::data::{random_data, RandomDataOptions};
use bwkb::fourier::ModeSet;
use bwkb::geometry::{SlabGeometry, Subdomain};
use bwkb::grids::{Discretization, SlabGrids};
use bwkb::manufactured::ManufacturedField;
use bwkb::params::PhysicalParams;
use bwkb::solvers::{
    solve_elementary, solve_elementary_dtn, solve_full, solve_mixed_stokes, ElementarySpec,
    MixedSpec,
};

fn setup() -> (SlabGeometry, PhysicalParams, Discretization) {
    (
        SlabGeometry::default(),
        PhysicalParams::default(),
        Discretization::new(3, 32),
    )
}

#[test]
fn full_solver_recovers_manufactured_solution() {
    let (geom, params, disc) = setup();
    let exact = ManufacturedField::full_recipe(geom, disc.modes, 3, 11);
    let data = exact.full_data(0.1, &params);
    let (sol, report) = solve_full(&data, 0.1, &geom, &params, &disc).unwrap();
    let err = exact.max_error(&sol, &Subdomain::ALL).unwrap();
    println!("{err:?} {report:?}");
    assert!(err.iter().all(|&e| e < 1e-8), "{err:?}");
    assert!(!report.unresolved);
}

#[test]
fn elementary_solvers_recover_manufactured_solution() {
    let (geom, params, disc) = setup();
    let exact = ManufacturedField::darcy_recipe(geom, disc.modes, 3, 5);
    let (gm, h, l) = exact.darcy_data(&params);
    let gp = exact.fluid_forces(&params);
    let grids = SlabGrids::uniform(&geom, &disc).unwrap();
    let spec = ElementarySpec::from_profiles(geom, disc.modes, grids, &gm, &gp, h, l).unwrap();
    let mono = solve_elementary(&spec, &params).unwrap();
    let err = exact.max_error(&mono, &Subdomain::ALL).unwrap();
    println!("mono {err:?}");
    assert!(err.iter().all(|&e| e < 1e-8), "{err:?}");
    let comp = solve_elementary_dtn(&spec, &params).unwrap();
    let err = exact.max_error(&comp, &Subdomain::ALL).unwrap();
    println!("dtn {err:?}");
    assert!(err.iter().all(|&e| e < 1e-8), "{err:?}");
}

#[test]
fn mixed_solver_recovers_manufactured_solution() {
    let (geom, params, disc) = setup();
    let exact = ManufacturedField::full_recipe(geom, disc.modes, 3, 2);
    let grids = SlabGrids::uniform(&geom, &disc).unwrap();
    let gp = exact.fluid_forces(&params);
    let spec = MixedSpec {
        geometry: geom,
        modes: disc.modes,
        g_top: gp
            .iter()
            .map(|g| bwkb::solvers::sample_volume(&g[0], &grids.fluid_top))
            .collect(),
        g_bottom: gp
            .iter()
            .map(|g| bwkb::solvers::sample_volume(&g[1], &grids.fluid_bottom))
            .collect(),
        gamma: exact.fluid_stress(&params),
        fluid_top: grids.fluid_top.clone(),
        fluid_bottom: grids.fluid_bottom.clone(),
    };
    let sol = solve_mixed_stokes(&spec, &params).unwrap();
    let mut worst: f64 = 0.0;
    for (i, f) in sol.fields.iter().enumerate() {
        for (strip, sub) in f.iter().zip([Subdomain::FluidTop, Subdomain::FluidBottom]) {
            let g = grids.get(sub);
            let [u, v, p] = &exact.strips[i][sub.index()];
            for (j, &y) in g.nodes.iter().enumerate() {
                worst = worst.max((strip.u[j] - u.eval(y)).norm());
                worst = worst.max((strip.v[j] - v.eval(y)).norm());
                worst = worst.max((strip.p[j] - p.eval(y)).norm());
            }
        }
    }
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn random_data_solution_is_real() {
    let (geom, params, disc) = setup();
    let data = random_data(3, ModeSet::new(3), RandomDataOptions::default());
    let (sol, _) = solve_full(&data, 0.05, &geom, &params, &disc).unwrap();
    assert_eq!(sol.conjugate_symmetry_defect(), 0.0);
}
