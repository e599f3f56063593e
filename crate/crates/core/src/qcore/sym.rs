use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::linalg::*;
use super::KetVector;
use crate::error::{Error, Result};

/// Occupation-number label of a symmetric basis state of `m` particles in dimension `d`.
///
/// For qubits `occ = (m-k, k)` is the state usually written `|M,k⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymBasisLabel {
    pub d: usize,
    pub m: usize,
    pub occ: Vec<usize>,
}

impl SymBasisLabel {
    pub fn new(d: usize, m: usize, occ: Vec<usize>) -> Result<Self> {
        if occ.len() != d || occ.iter().sum::<usize>() != m {
            return Err(Error::Invalid(format!("occupation {occ:?} does not describe {m} particles in d={d}")));
        }
        Ok(Self { d, m, occ })
    }

    /// Qubit label `|M,k⟩`: `k` particles in state `|1⟩`.
    pub fn qubit(m: usize, k: usize) -> Result<Self> {
        if k > m {
            return Err(Error::Invalid(format!("k={k} exceeds M={m}")));
        }
        Self::new(2, m, vec![m - k, k])
    }
}

/// Exact binomial coefficient (0 when `k > n`).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

/// `D(M,d) = C(d+M-1, M)`.
pub fn sym_dim(d: usize, m: usize) -> usize {
    binomial((d + m - 1) as u64, m as u64) as usize
}

/// All labels for `(d, m)` in descending lexicographic order of `occ`,
/// so that qubit label `k` sits at position `k`.
pub fn sym_labels(d: usize, m: usize) -> Vec<SymBasisLabel> {
    fn rec(d: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in (0..=left).rev() {
            cur.push(x);
            rec(d, left - x, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(d, m, &mut Vec::new(), &mut raw);
    raw.into_iter().map(|occ| SymBasisLabel { d, m, occ }).collect()
}

fn occupation(index: usize, d: usize, m: usize) -> Vec<usize> {
    let mut occ = vec![0; d];
    let mut i = index;
    for _ in 0..m {
        occ[i % d] += 1;
        i /= d;
    }
    occ
}

fn multinomial(occ: &[usize]) -> f64 {
    let m: usize = occ.iter().sum();
    let mut r = 1.0;
    let mut left = m as u64;
    for &o in occ {
        r *= binomial(left, o as u64) as f64;
        left -= o as u64;
    }
    r
}

/// Isometry from the symmetric subspace (columns ordered as [`sym_labels`]) into `(C^d)^{⊗m}`.
pub fn sym_isometry(d: usize, m: usize) -> Result<CMat> {
    if d < 2 || m == 0 {
        return Err(Error::Domain(format!("symmetric subspace needs d>=2, M>=1 (got d={d}, M={m})")));
    }
    let n = total_dim(&vec![d; m])?;
    let labels = sym_labels(d, m);
    let pos: HashMap<Vec<usize>, usize> = labels.iter().enumerate().map(|(k, l)| (l.occ.clone(), k)).collect();
    let norms: Vec<f64> = labels.iter().map(|l| 1.0 / multinomial(&l.occ).sqrt()).collect();
    let mut p = CMat::zeros(n, labels.len());
    for i in 0..n {
        let k = pos[&occupation(i, d, m)];
        p[(i, k)] = cr(norms[k]);
    }
    Ok(p)
}

/// Projector onto the Bose subspace of `m` qudits.
pub fn symmetric_projector(d: usize, m: usize) -> Result<CMat> {
    let p = sym_isometry(d, m)?;
    Ok(&p * p.adjoint())
}

/// Normalized symmetric basis state for `label`, as a vector on `(C^d)^{⊗m}`.
pub fn sym_basis_vector(label: &SymBasisLabel) -> Result<KetVector> {
    let SymBasisLabel { d, m, occ } = label;
    if occ.len() != *d || occ.iter().sum::<usize>() != *m {
        return Err(Error::Invalid(format!("occupation {occ:?} does not describe {m} particles in d={d}")));
    }
    let n = total_dim(&vec![*d; *m])?;
    let s = 1.0 / multinomial(occ).sqrt();
    let mut amps = CVec::zeros(n);
    for i in 0..n {
        if occupation(i, *d, *m) == *occ {
            amps[i] = cr(s);
        }
    }
    KetVector::new(vec![*d; *m], amps)
}

/// Collective lowering operator `J₋` (|0⟩ → |1⟩) on qubit `sym(m)`, basis `|m,k⟩`.
pub fn lowering_on_sym(m: usize) -> CMat {
    let mut j = CMat::zeros(m + 1, m + 1);
    for k in 0..m {
        j[(k + 1, k)] = cr((((k + 1) * (m - k)) as f64).sqrt());
    }
    j
}

pub fn raising_on_sym(m: usize) -> CMat {
    lowering_on_sym(m).adjoint()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Representation of a single-particle operator `u` on `sym(m)`, i.e. `P† u^{⊗m} P`,
/// computed by expanding creation-operator monomials instead of forming `u^{⊗m}`.
pub fn sym_rep(u: &CMat, m: usize) -> Result<CMat> {
    let d = u.nrows();
    if u.ncols() != d || d < 2 {
        return Err(Error::Dimension("sym_rep needs a square single-particle operator".into()));
    }
    let labels = sym_labels(d, m);
    let pos: HashMap<Vec<usize>, usize> = labels.iter().enumerate().map(|(k, l)| (l.occ.clone(), k)).collect();
    let mut out = CMat::zeros(labels.len(), labels.len());
    for (col, lab) in labels.iter().enumerate() {
        // Polynomial in the output creation operators, keyed by exponent vector.
        let mut poly: HashMap<Vec<usize>, C64> = HashMap::new();
        poly.insert(vec![0; d], cr(1.0));
        for (j, &oj) in lab.occ.iter().enumerate() {
            for _ in 0..oj {
                let mut next: HashMap<Vec<usize>, C64> = HashMap::new();
                for (mono, coef) in &poly {
                    for i in 0..d {
                        let uij = u[(i, j)];
                        if uij == cr(0.0) {
                            continue;
                        }
                        let mut e = mono.clone();
                        e[i] += 1;
                        *next.entry(e).or_insert(cr(0.0)) += coef * uij;
                    }
                }
                poly = next;
            }
        }
        let norm_in: f64 = lab.occ.iter().map(|&o| factorial(o)).product::<f64>().sqrt();
        for (mono, coef) in poly {
            let norm_out: f64 = mono.iter().map(|&o| factorial(o)).product::<f64>().sqrt();
            out[(pos[&mono], col)] += coef * (norm_out / norm_in);
        }
    }
    Ok(out)
}

/// Matrix of the hopping operator `a_to† a_from` on `sym(m)` in dimension `d`.
pub fn sym_hopping(d: usize, m: usize, to: usize, from: usize) -> CMat {
    let labels = sym_labels(d, m);
    let pos: HashMap<Vec<usize>, usize> = labels.iter().enumerate().map(|(k, l)| (l.occ.clone(), k)).collect();
    let mut h = CMat::zeros(labels.len(), labels.len());
    for (k, lab) in labels.iter().enumerate() {
        if lab.occ[from] == 0 {
            continue;
        }
        let mut occ = lab.occ.clone();
        let f = occ[from] as f64;
        occ[from] -= 1;
        occ[to] += 1;
        h[(pos[&occ], k)] += cr((f * occ[to] as f64).sqrt());
    }
    h
}

/// Single-particle reduced density matrix of a state on `sym(m)` in dimension `d`:
/// `ρ_{ab} = ⟨a_b† a_a⟩ / m`.
pub fn sym_one_body(d: usize, m: usize, state: &CVec) -> Result<CMat> {
    let labels = sym_labels(d, m);
    if state.len() != labels.len() {
        return Err(Error::Dimension(format!("state of length {} on sym({m}) with d={d}", state.len())));
    }
    let pos: HashMap<Vec<usize>, usize> = labels.iter().enumerate().map(|(k, l)| (l.occ.clone(), k)).collect();
    let mut rho = CMat::zeros(d, d);
    for (k, lab) in labels.iter().enumerate() {
        let amp = state[k];
        if amp == cr(0.0) {
            continue;
        }
        for a in 0..d {
            if lab.occ[a] == 0 {
                continue;
            }
            for b in 0..d {
                let mut occ = lab.occ.clone();
                occ[a] -= 1;
                occ[b] += 1;
                let f = ((lab.occ[a] * occ[b]) as f64).sqrt();
                // ⟨ψ|a_b† a_a|ψ⟩ = Σ conj(ψ_{occ'}) ψ_occ √(n_a (n_b'+...)).
                rho[(a, b)] += state[pos[&occ]].conj() * amp * f;
            }
        }
    }
    Ok(rho * cr(1.0 / m as f64))
}

/// Same as [`sym_one_body`] for a density operator on `sym(m)`.
pub fn sym_one_body_mixed(d: usize, m: usize, rho_sym: &CMat) -> Result<CMat> {
    let (vals, vecs) = herm_eig(rho_sym);
    let mut out = CMat::zeros(d, d);
    for (k, &l) in vals.iter().enumerate() {
        if l.abs() < 1e-15 {
            continue;
        }
        let v: CVec = vecs.column(k).into_owned();
        out += sym_one_body(d, m, &v)? * cr(l);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(40, 20), 137846528820);
        assert_eq!(sym_dim(3, 2), 6);
        assert_eq!(sym_dim(2, 7), 8);
    }

    #[test]
    fn labels_order_matches_qubit_k() {
        let l = sym_labels(2, 3);
        for (k, lab) in l.iter().enumerate() {
            assert_eq!(lab.occ, vec![3 - k, k]);
        }
        let l = sym_labels(3, 2);
        assert_eq!(l.len(), 6);
        assert_eq!(l[0].occ, vec![2, 0, 0]);
        assert_eq!(l[5].occ, vec![0, 0, 2]);
    }

    #[test]
    fn projector_ranks() {
        let p = symmetric_projector(2, 2).unwrap();
        assert!((p.trace().re - 3.0).abs() < 1e-12);
        let p = symmetric_projector(3, 2).unwrap();
        assert!((p.trace().re - 6.0).abs() < 1e-12);
        assert!(max_abs(&(&p * &p - &p)) < 1e-12);
        assert!(hermiticity_error(&p) < 1e-15);
    }

    #[test]
    fn basis_vector_examples() {
        let v = sym_basis_vector(&SymBasisLabel::new(2, 2, vec![1, 1]).unwrap()).unwrap();
        let s = 0.5f64.sqrt();
        assert!((v.amps.clone() - CVec::from_vec(vec![cr(0.0), cr(s), cr(s), cr(0.0)])).norm() < 1e-15);
        let v = sym_basis_vector(&SymBasisLabel::new(2, 3, vec![2, 1]).unwrap()).unwrap();
        let t = 1.0 / 3f64.sqrt();
        for (i, a) in v.amps.iter().enumerate() {
            let want = if [1, 2, 4].contains(&i) { t } else { 0.0 };
            assert!((a.re - want).abs() < 1e-15 && a.im == 0.0);
        }
        let bad = SymBasisLabel { d: 2, m: 3, occ: vec![1, 1] };
        assert!(sym_basis_vector(&bad).is_err());
    }

    #[test]
    fn isometry_columns_orthonormal() {
        for (d, m) in [(2, 4), (3, 3), (4, 2)] {
            let p = sym_isometry(d, m).unwrap();
            let g = p.adjoint() * &p;
            assert!(max_abs(&(g - identity(sym_dim(d, m)))) < 1e-12);
        }
    }

    #[test]
    fn lowering_matches_spin_algebra() {
        let m = 4;
        let jm = lowering_on_sym(m);
        let jp = raising_on_sym(m);
        let comm = &jp * &jm - &jm * &jp;
        for k in 0..=m {
            // [J+, J-] = 2 Jz with Jz = (m - 2k)/2 on |m,k⟩.
            assert!((comm[(k, k)].re - (m as f64 - 2.0 * k as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn sym_rep_matches_tensor_power() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (d, m) in [(2, 3), (3, 2), (2, 5)] {
            let u = random_unitary(d, &mut rng);
            let p = sym_isometry(d, m).unwrap();
            let mut big = identity(1);
            for _ in 0..m {
                big = kron(&big, &u);
            }
            let want = p.adjoint() * big * &p;
            let got = sym_rep(&u, m).unwrap();
            assert!(max_abs(&(want - got)) < 1e-12);
        }
    }

    #[test]
    fn one_body_matches_partial_trace() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for (d, m) in [(2, 3), (3, 3)] {
            let p = sym_isometry(d, m).unwrap();
            let v = random_ket(p.ncols(), &mut rng);
            let full = &p * &v;
            let rho = partial_trace(&projector(&full), &vec![d; m], &[0]).unwrap();
            let got = sym_one_body(d, m, &v).unwrap();
            assert!(max_abs(&(rho - got)) < 1e-12);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(sym_isometry(2, 13), Err(Error::SizeCap { .. })));
    }
}
