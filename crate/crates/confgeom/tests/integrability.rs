use confgeom::integrability::{self, ConformalData, FieldSlot, Grid};
use confgeom::jets::{ConformalFactor, SurfaceChart};
use confgeom::Error;

fn torus() -> SurfaceChart {
    SurfaceChart::flat_torus(0.6).unwrap()
}

fn affine() -> ConformalFactor {
    ConformalFactor::affine(1.3, [0.2, 0.1, 0.0, -0.3]).unwrap()
}

#[test]
fn finite_difference_weights() {
    let w = integrability::fd_weights(&[-1.0, 0.0, 1.0], 1);
    assert!((w[0] + 0.5).abs() < 1e-15 && w[1].abs() < 1e-15 && (w[2] - 0.5).abs() < 1e-15);
    let w = integrability::fd_weights(&[-1.0, 0.0, 1.0], 2);
    assert!((w[0] - 1.0).abs() < 1e-15 && (w[1] + 2.0).abs() < 1e-15);
}

#[test]
fn chart_data_satisfies_structure_equations() {
    for (chart, factor) in [(torus(), affine()), (SurfaceChart::clifford(), affine())] {
        let grid = Grid::periodic_over(chart.periods(), 8, 8).unwrap();
        let data = ConformalData::from_chart(&chart, &factor, grid, 6).unwrap();
        let s = data.residual_summary().unwrap();
        assert!(s.worst() < 1e-9, "{}: {:?}", chart.name(), s.max);
    }
}

#[test]
fn sign_flipped_starred_codazzi_fails_for_affine_metric() {
    let grid = Grid::periodic_over(torus().periods(), 8, 8).unwrap();
    let s = ConformalData::from_chart(&torus(), &affine(), grid, 6).unwrap().residual_summary().unwrap();
    assert!(s.worst() < 1e-9);
    assert!(s.ystar_2_alt_u2 > 1e-3);
    assert!(s.ystar_2_alt_u1 > 1e-3);
}

#[test]
fn perturbations_are_detected() {
    let grid = Grid::periodic_over(torus().periods(), 32, 32).unwrap();
    let data = ConformalData::from_chart(&torus(), &affine(), grid, 6).unwrap();
    let base = data.to_tabulated().residual_summary().unwrap().worst();
    for slot in [
        FieldSlot::M,
        FieldSlot::Omega(1),
        FieldSlot::BigOmega12,
        FieldSlot::OmegaStar(0, 0),
        FieldSlot::OmegaStar(0, 1),
    ] {
        let r = data.perturbed(slot, 1e-3).residual_summary().unwrap().worst();
        assert!(r > 10.0 * base, "{slot:?}: {r} vs {base}");
    }
}

#[test]
fn tabulated_validation() {
    let grid = Grid::periodic_over([1.0, 1.0], 8, 8).unwrap();
    let n = grid.len();
    let ok = |m: f64, b: [[f64; 2]; 2]| {
        ConformalData::tabulated(grid, vec![m; n], vec![[0.0; 2]; n], vec![b; n], vec![[[0.0; 2]; 2]; n])
    };
    assert!(ok(1.0, [[1.0, 0.0], [0.0, -1.0]]).is_ok());
    assert!(matches!(ok(-1.0, [[1.0, 0.0], [0.0, -1.0]]), Err(Error::BadParameter(_))));
    assert!(matches!(ok(1.0, [[1.0, 0.0], [0.0, 1.0]]), Err(Error::BadParameter(_))));
    let short = ConformalData::tabulated(grid, vec![1.0; 3], vec![], vec![], vec![]);
    assert!(matches!(short, Err(Error::Shape(_))));
}

#[test]
fn grid_geometry() {
    let g = Grid::new(8, 10, [1.0, 2.0], [0.5, 0.25], [false, true]).unwrap();
    assert_eq!(g.len(), 80);
    assert_eq!(g.index(3, 2), 19);
    assert_eq!(g.point(3, 2), [2.5, 2.5]);
    assert_eq!(g.point_of(19), [2.5, 2.5]);
}

#[test]
fn structure_matrices_preserve_the_gram_matrix() {
    // A G + G Aᵀ = 0 for the frame Gram matrix G
    let grid = Grid::periodic_over(torus().periods(), 8, 8).unwrap();
    let data = ConformalData::from_chart(&torus(), &affine(), grid, 6).unwrap();
    let g = integrability::frame_gram();
    let f = data.sample([0.3, 0.9]).unwrap();
    for i in 0..2 {
        let a = integrability::structure_matrix(&f, i);
        for r in 0..5 {
            for c in 0..5 {
                let v: f64 = (0..5).map(|s| a[r][s] * g[s][c] + g[r][s] * a[c][s]).sum();
                assert!(v.abs() < 1e-12, "A_{i} [{r}][{c}] = {v}");
            }
        }
    }
}

#[test]
fn starred_perturbation_only_touches_starred_equations() {
    let grid = Grid::periodic_over(torus().periods(), 32, 32).unwrap();
    let data = ConformalData::from_chart(&torus(), &affine(), grid, 6).unwrap();
    let base = data.to_tabulated().residual_summary().unwrap();
    let hit = data.perturbed(FieldSlot::OmegaStar(0, 1), 1e-3).residual_summary().unwrap();
    // codazzi-y first, then codazzi-y*
    for k in 0..2 {
        assert!((hit.max[k] - base.max[k]).abs() < 1e-12, "{k}: {} vs {}", hit.max[k], base.max[k]);
    }
    let starred = hit.max[2].max(hit.max[3]);
    assert!(starred > 1e-4 && starred < 1e-1, "{starred}");
}
