//! Kernel generators in wedge coordinates. `w(&[(c, i, j)])` is
//! `Σ c f_i ∧ f_j`; block vectors list the four (or two) components.

use syzygy::exterior::Wedge;

pub fn w(terms: &[(i64, usize, usize)]) -> Wedge {
    terms.iter().fold(Wedge::zero(), |acc, &(c, i, j)| acc.add(&Wedge::monomial(&[i, j], c)))
}

pub fn z() -> Wedge {
    Wedge::zero()
}

pub fn kernel_b() -> Vec<Vec<Wedge>> {
    vec![
        vec![z(), z(), w(&[(1, 2, 4)]), z()],
        vec![z(), z(), z(), w(&[(1, 3, 5)])],
        vec![z(), z(), w(&[(1, 3, 5)]), w(&[(1, 2, 5), (1, 3, 4)])],
        vec![z(), z(), w(&[(1, 2, 5), (1, 3, 4)]), w(&[(1, 2, 4)])],
    ]
}

pub fn kernel_c() -> Vec<Vec<Wedge>> {
    vec![
        vec![z(), w(&[(1, 4, 5)]), z(), z()],
        vec![z(), z(), z(), w(&[(1, 3, 5)])],
        vec![z(), z(), w(&[(1, 3, 5)]), w(&[(1, 3, 4), (1, 2, 5)])],
        vec![w(&[(-1, 4, 5)]), w(&[(1, 3, 4), (-1, 2, 5)]), z(), z()],
        vec![z(), z(), w(&[(1, 2, 4)]), z()],
        vec![z(), z(), w(&[(1, 3, 4), (1, 2, 5)]), w(&[(1, 2, 4)])],
        vec![w(&[(1, 2, 3)]), z(), z(), z()],
        vec![w(&[(1, 2, 5), (-1, 3, 4)]), w(&[(1, 2, 3)]), z(), z()],
    ]
}

/// The reference D generators.
pub fn kernel_d_listed() -> Vec<Vec<Wedge>> {
    vec![
        vec![z(), z(), w(&[(1, 2, 4)]), z()],
        vec![z(), z(), z(), w(&[(1, 2, 3)])],
        vec![z(), z(), w(&[(1, 2, 3)]), w(&[(1, 3, 4)])],
        vec![z(), z(), w(&[(1, 3, 4)]), w(&[(1, 2, 4)])],
        vec![w(&[(1, 2, 3)]), z(), z(), w(&[(1, 1, 3)])],
        vec![z(), w(&[(1, 2, 4)]), w(&[(1, 1, 4)]), z()],
        vec![w(&[(1, 2, 4)]), w(&[(1, 3, 4)]), z(), w(&[(1, 1, 4)])],
        vec![w(&[(1, 3, 4)]), w(&[(1, 2, 3)]), w(&[(1, 1, 3)]), z()],
    ]
}

/// The reference D list with the third and fifth signs fixed and the last
/// two generators recomputed.
pub fn kernel_d_corrected() -> Vec<Vec<Wedge>> {
    let mut g = kernel_d_listed();
    g[2] = vec![z(), z(), w(&[(1, 2, 3)]), w(&[(-1, 3, 4)])];
    g[4] = vec![w(&[(1, 2, 3)]), z(), z(), w(&[(-1, 1, 3)])];
    g[6] = vec![w(&[(1, 2, 4)]), w(&[(1, 3, 4)]), w(&[(2, 1, 2)]), w(&[(1, 1, 4)])];
    g[7] = vec![w(&[(1, 3, 4)]), w(&[(-1, 2, 3)]), w(&[(1, 1, 3)]), w(&[(2, 1, 2)])];
    g
}

/// γ kernel for `ω12 = f1, ω13 = f2, ω22 = f3, ω23 = f4`.
pub fn kernel_gamma() -> Vec<Vec<Wedge>> {
    vec![
        vec![w(&[(1, 1, 2)]), z()],
        vec![z(), w(&[(1, 3, 4)])],
        vec![w(&[(1, 1, 4), (1, 3, 2)]), w(&[(1, 1, 2), (1, 3, 4)])],
        vec![w(&[(1, 1, 2), (1, 3, 4)]), w(&[(1, 1, 4), (1, 3, 2)])],
    ]
}

/// β kernels with inputs `(y, z, s⊗x, t⊗x)`.
pub fn kernel_beta2() -> Vec<Vec<Wedge>> {
    vec![
        vec![z(), z(), z(), w(&[(1, 2, 4)])],
        vec![z(), z(), w(&[(1, 1, 3)]), z()],
        vec![z(), z(), w(&[(1, 2, 4)]), w(&[(1, 2, 3), (1, 1, 4)])],
        vec![z(), z(), w(&[(1, 2, 3), (1, 1, 4)]), w(&[(1, 1, 3)])],
    ]
}

pub fn kernel_beta3() -> Vec<Vec<Wedge>> {
    vec![
        vec![w(&[(1, 2, 3)]), z(), z(), w(&[(1, 3, 4)])],
        vec![z(), z(), z(), w(&[(1, 2, 3)])],
        vec![w(&[(1, 1, 3)]), w(&[(1, 2, 3)]), w(&[(1, 3, 4)]), w(&[(2, 2, 4)])],
        vec![z(), z(), w(&[(1, 2, 3)]), w(&[(1, 1, 3)])],
        vec![z(), w(&[(1, 1, 2)]), w(&[(1, 1, 4)]), z()],
        vec![z(), z(), w(&[(1, 1, 2)]), z()],
        vec![w(&[(1, 1, 2)]), w(&[(1, 1, 3)]), w(&[(2, 2, 4)]), w(&[(1, 1, 4)])],
        vec![z(), z(), w(&[(1, 1, 3)]), w(&[(1, 1, 2)])],
    ]
}
