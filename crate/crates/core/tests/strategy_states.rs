use causal_probe::combinat::{all_permutations, multiplicity_u64, permutation_sign, group_partitions};
use causal_probe::numkernel::{hermitian_eigenvalues, kron_all, ComplexMatrix, C64};
use causal_probe::quantum::{haar_unitary, permutation_unitary, random_permutation, Rng};
use causal_probe::strategies::{coherent_probe, grouped_singlet_state, singlet_state};

fn collective(u: &ComplexMatrix, n: usize) -> ComplexMatrix {
    kron_all(&vec![u.clone(); n])
}

fn conjugate(u: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    u.matmul(rho).matmul(&u.dagger())
}

fn determinant(u: &ComplexMatrix) -> C64 {
    let d = u.rows();
    all_permutations(d)
        .iter()
        .map(|p| {
            let prod = (0..d).fold(C64::new(1.0, 0.0), |acc, i| acc * u.row(i)[p[i]]);
            prod * permutation_sign(p) as f64
        })
        .sum()
}

fn antisymmetric_vector(d: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); d.pow(d as u32)];
    let norm = (1..=d).product::<usize>() as f64;
    for p in all_permutations(d) {
        let idx = p.iter().fold(0, |acc, &x| acc * d + x);
        v[idx] = C64::new(permutation_sign(&p) as f64 / norm.sqrt(), 0.0);
    }
    v
}

#[test]
fn coherent_probe_is_invariant_under_collective_permutations() {
    let mut rng = Rng::new(11);
    for (n, d) in [(1, 2), (3, 2), (2, 3), (3, 3)] {
        let rho = coherent_probe(n, d).unwrap().rho().into_owned();
        for _ in 0..5 {
            let u = collective(&permutation_unitary(&random_permutation(d, &mut rng)).unwrap(), n);
            assert!(conjugate(&u, &rho).max_abs_diff(&rho) <= 1e-14);
        }
    }
}

#[test]
fn singlet_picks_up_the_determinant() {
    let mut rng = Rng::new(12);
    for d in [2, 3] {
        let s = antisymmetric_vector(d);
        let rho = singlet_state(d).unwrap().rho().into_owned();
        assert!(rho.max_abs_diff(&ComplexMatrix::projector(&s)) <= 1e-14);
        for _ in 0..5 {
            let u = haar_unitary(d, &mut rng);
            let det = determinant(&u);
            let moved = collective(&u, d).mul_vec(&s);
            let residual = moved.iter().zip(&s).map(|(m, v)| (m - det * v).norm()).fold(0.0, f64::max);
            assert!(residual <= 1e-12, "d={d}: residual {residual}");
            assert!(conjugate(&collective(&u, d), &rho).max_abs_diff(&rho) <= 1e-12);
        }
    }
}

#[test]
fn grouped_singlets_are_collectively_invariant() {
    let mut rng = Rng::new(13);
    for (n, d) in [(4, 2), (6, 2), (3, 3)] {
        for p in group_partitions(n, d).unwrap().iter().take(4) {
            let rho = grouped_singlet_state(p, n, d).unwrap().rho().into_owned();
            let u = collective(&haar_unitary(d, &mut rng), n);
            assert!(conjugate(&u, &rho).max_abs_diff(&rho) <= 1e-12, "{:?}", p.groups());
        }
    }
}

#[test]
fn grouped_singlets_span_the_multiplicity_space() {
    for (n, d) in [(4, 2), (6, 2), (3, 3)] {
        let parts = group_partitions(n, d).unwrap();
        let mut sum = ComplexMatrix::zeros(d.pow(n as u32), d.pow(n as u32));
        for p in &parts {
            sum.add_assign_scaled(&grouped_singlet_state(p, n, d).unwrap().rho(), C64::new(1.0, 0.0));
        }
        let rank = hermitian_eigenvalues(&sum).unwrap().iter().filter(|&&e| e > 1e-10).count();
        assert_eq!(rank as u64, multiplicity_u64(n, d).unwrap(), "n={n}, d={d}");
    }
}
