//! Dense reference implementations built from explicit Kronecker products.
//! Nothing here goes through the library's apply kernels.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type M = DMatrix<Complex64>;
pub type V = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Single-qubit matrices in the `|u> = 0`, `|d> = 1` basis.
pub fn pauli(letter: char) -> M {
    let (o, l, i) = (c(0., 0.), c(1., 0.), c(0., 1.));
    match letter {
        'I' => M::from_row_slice(2, 2, &[l, o, o, l]),
        'X' => M::from_row_slice(2, 2, &[o, l, l, o]),
        // σy|u> = i|d>, σy|d> = -i|u>
        'Y' => M::from_row_slice(2, 2, &[o, -i, i, o]),
        'Z' => M::from_row_slice(2, 2, &[l, o, o, -l]),
        other => panic!("not a Pauli letter: {other}"),
    }
}

pub fn kron_all(factors: &[M]) -> M {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| acc.kronecker(f))
}

/// Dense string over `n` qubits from `(position, letter)` pairs.
pub fn string(n: usize, letters: &[(usize, char)]) -> M {
    let factors: Vec<M> = (0..n)
        .map(|q| {
            letters
                .iter()
                .find(|(p, _)| *p == q)
                .map(|(_, l)| pauli(*l))
                .unwrap_or_else(|| pauli('I'))
        })
        .collect();
    kron_all(&factors)
}

/// `P_up ⊗ I + P_down ⊗ U` with control qubit `control` and a single-qubit
/// `u` on qubit `target`.
pub fn controlled(n: usize, control: usize, target: usize, u: &M) -> M {
    let mut up = vec![pauli('I'); n];
    up[control] = M::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
    let mut down = vec![pauli('I'); n];
    down[control] = M::from_row_slice(2, 2, &[c(0., 0.), c(0., 0.), c(0., 0.), c(1., 0.)]);
    down[target] = u.clone();
    kron_all(&up) + kron_all(&down)
}

/// `exp(-i θ σ_x)`.
pub fn x_rotation(theta: f64) -> M {
    pauli('I') * c(theta.cos(), 0.) + pauli('X') * c(0., -theta.sin())
}

pub fn basis(n: usize, index: usize) -> V {
    let mut v = V::from_element(1 << n, c(0., 0.));
    v[index] = c(1., 0.);
    v
}

/// `(a1|u> + a2|d>) ⊗ |u...u>` over `1 + n_atoms` qubits.
pub fn ch_initial(n_atoms: usize, a1: Complex64, a2: Complex64) -> V {
    let n = n_atoms + 1;
    basis(n, 0) * a1 + basis(n, 1 << n_atoms) * a2
}

/// Dense Coleman-Hepp passage with calibrated pulses.
pub fn ch_final(n_atoms: usize, a1: Complex64, a2: Complex64) -> V {
    let n = n_atoms + 1;
    let mut v = ch_initial(n_atoms, a1, a2);
    for i in 1..=n_atoms {
        v = controlled(n, 0, i, &x_rotation(std::f64::consts::FRAC_PI_2)) * v;
    }
    v
}

/// `σ_x^0 Π σ_y^i`.
pub fn it_dense(n_atoms: usize) -> M {
    let mut letters = vec![(0, 'X')];
    letters.extend((1..=n_atoms).map(|i| (i, 'Y')));
    string(n_atoms + 1, &letters)
}

/// `(1/N) Σ σ_z^i`.
pub fn pointer_dense(n_atoms: usize) -> M {
    let n = n_atoms + 1;
    let mut m = M::zeros(1 << n, 1 << n);
    for i in 1..=n_atoms {
        m += string(n, &[(i, 'Z')]);
    }
    m * c(1.0 / n_atoms as f64, 0.)
}

pub fn expect(m: &M, v: &V) -> Complex64 {
    (v.adjoint() * m * v)[(0, 0)]
}

pub fn trace_rho(rho: &M, q: &M) -> Complex64 {
    (rho * q).trace()
}

pub fn outer(a: &V, b: &V) -> M {
    a * b.adjoint()
}

pub fn max_abs(m: &M) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs_diff(a: &M, b: &M) -> f64 {
    max_abs(&(a - b))
}

/// Random `(a1, a2)` with `|a1|² + |a2|² = 1`.
pub fn random_pair(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    let t = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
    let p1 = rng.random_range(0.0..std::f64::consts::TAU);
    let p2 = rng.random_range(0.0..std::f64::consts::TAU);
    (Complex64::from_polar(t.cos(), p1), Complex64::from_polar(t.sin(), p2))
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> M {
    let g = M::from_fn(dim, dim, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&g + g.adjoint()) * c(0.5, 0.)
}

/// Occupation-number matrix `diag(0, 1, …, d-1)`.
pub fn number(d: usize) -> M {
    M::from_fn(d, d, |i, j| if i == j { c(i as f64, 0.) } else { c(0., 0.) })
}

/// Truncated `a + a†`.
pub fn quadrature(d: usize) -> M {
    M::from_fn(d, d, |i, j| {
        if i + 1 == j || j + 1 == i {
            c((i.max(j) as f64).sqrt(), 0.)
        } else {
            c(0., 0.)
        }
    })
}

pub fn identity(d: usize) -> M {
    M::identity(d, d)
}
