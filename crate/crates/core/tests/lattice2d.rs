use dirac_qca::lattice2d::{
    dressed_operator_checks, joint_vacuum_2d, locality_identity_2d, oriented_links, p_commutation_table_2d,
    Lattice2D,
};
use dirac_qca::QcaError;

const PATCHES: [(usize, usize); 3] = [(2, 2), (2, 3), (3, 2)];

#[test]
fn dressing_algebra() {
    for (w, h) in PATCHES {
        let r = dressed_operator_checks(&Lattice2D::new(w, h).unwrap()).unwrap();
        assert!(r.phase_hermiticity <= 1e-15 && r.phase_square <= 1e-15, "{w}x{h}");
        assert_eq!(r.alpha_violations, 0);
        assert!(r.distinct_site_commutator <= 1e-14);
        assert!(r.bare_car_residual <= 1e-14);
        assert!(r.exchange_residual <= 1e-14);
    }
}

#[test]
fn parity_commutation_table() {
    for (w, h) in PATCHES {
        let l = Lattice2D::new(w, h).unwrap();
        let t = p_commutation_table_2d(&l).unwrap();
        let k = l.n_sites() * (l.n_sites() - 1);
        assert_eq!(t.pairs_checked, k * (k - 1) / 2);
        assert!(t.commuting_max <= 1e-14 && t.anticommuting_max <= 1e-14);
    }
}

#[test]
fn vacuum_and_locality_per_direction() {
    for (w, h) in PATCHES {
        let l = Lattice2D::new(w, h).unwrap();
        for link in [(1, 0), (0, 1)] {
            let links = oriented_links(&l, &[link]).unwrap();
            let v = joint_vacuum_2d(&l, &links).unwrap();
            assert!(v.eigen_residual <= 1e-12);
            assert!(v.sigma_trace_distance <= 1e-12);
            assert!(v.max_tau_entropy() > 0.1);
            for &(from, _) in &links.pairs {
                let r = locality_identity_2d(from, link, &l, &v).unwrap();
                assert!(r.operator_identity_residual <= 1e-14);
                assert!(r.eigenspace_residual <= 1e-12);
                assert!(r.matrix_element_residual <= 1e-12);
            }
        }
    }
}

#[test]
fn both_axes_together_are_rejected() {
    // P_{n,n+x} and P_{n,n+y} share theta1_n and anticommute
    for (w, h) in PATCHES {
        let l = Lattice2D::new(w, h).unwrap();
        assert!(matches!(oriented_links(&l, &[(1, 0), (0, 1)]), Err(QcaError::NonCommutingLinks { .. })));
    }
}

#[test]
fn diagonal_links_with_one_axis() {
    let l = Lattice2D::new(3, 2).unwrap();
    assert!(matches!(oriented_links(&l, &[(1, 0), (1, 1)]), Err(QcaError::NonCommutingLinks { .. })));
    assert!(matches!(oriented_links(&l, &[(1, 0), (-2, 0)]), Err(QcaError::ParallelLinks { .. })));
}
