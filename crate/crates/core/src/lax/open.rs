//! Symbolic open-chain Hamiltonians read off the Lax product.

use std::collections::BTreeMap;

/// One monomial `coeff · ∏_{j∈momenta} p_j · exp(Σ_j exp[j]·q_j)`.
///
/// Indices are 0-based over the `N` open-chain sites. Each momentum appears
/// at most once, so the quantized operator `∏ ∂_j` has no ordering ambiguity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct OpenTerm {
    pub coeff: i64,
    pub momenta: Vec<usize>,
    pub exp: Vec<i32>,
}

/// Sum of monomials, keyed by (λ-degree, momenta, exponent).
type Entry = BTreeMap<(usize, Vec<usize>, Vec<i32>), i64>;

fn mul_entry(a: &Entry, b: &Entry) -> Entry {
    let mut out = Entry::new();
    for ((da, pa, ea), ca) in a {
        for ((db, pb, eb), cb) in b {
            let mut p: Vec<usize> = pa.iter().chain(pb).copied().collect();
            p.sort_unstable();
            let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry((da + db, p, e)).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn add_entry(a: &Entry, b: &Entry) -> Entry {
    let mut out = a.clone();
    for (k, c) in b {
        *out.entry(k.clone()).or_default() += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `h_1..h_N` of the open chain with `n` sites, from the (1,1) entry of
/// `T_1 ··· T_n` with `T_j = [[λ + p_j, −e^{q_j}], [e^{−q_j}, 0]]`:
/// `A(λ) = Σ_k λ^{n−k} h_k`.
pub fn open_hamiltonian_terms(n: usize) -> Vec<Vec<OpenTerm>> {
    let zero_e = vec![0i32; n];
    let single = |deg: usize, p: Vec<usize>, e: Vec<i32>, c: i64| -> Entry {
        let mut m = Entry::new();
        m.insert((deg, p, e), c);
        m
    };
    let one = single(0, vec![], zero_e.clone(), 1);
    let mut m = [[one.clone(), Entry::new()], [Entry::new(), one]];
    for j in 0..n {
        let mut e_plus = zero_e.clone();
        e_plus[j] = 1;
        let mut e_minus = zero_e.clone();
        e_minus[j] = -1;
        let t11 = add_entry(
            &single(1, vec![], zero_e.clone(), 1),
            &single(0, vec![j], zero_e.clone(), 1),
        );
        let t12 = single(0, vec![], e_plus, -1);
        let t21 = single(0, vec![], e_minus, 1);
        let t = [[t11, t12], [t21, Entry::new()]];
        let mut next: [[Entry; 2]; 2] = Default::default();
        for r in 0..2 {
            for c in 0..2 {
                next[r][c] = add_entry(&mul_entry(&m[r][0], &t[0][c]), &mul_entry(&m[r][1], &t[1][c]));
            }
        }
        m = next;
    }
    let mut h: Vec<Vec<OpenTerm>> = vec![Vec::new(); n + 1];
    for ((deg, p, e), c) in &m[0][0] {
        h[n - deg].push(OpenTerm {
            coeff: *c,
            momenta: p.clone(),
            exp: e.clone(),
        });
    }
    h
}

/// Evaluates `h_k` at a classical phase point (first `n` sites).
pub fn eval_open_terms(terms: &[OpenTerm], q: &[f64], p: &[f64]) -> f64 {
    terms
        .iter()
        .map(|t| {
            let pm: f64 = t.momenta.iter().map(|&j| p[j]).product();
            let ex: f64 = t.exp.iter().zip(q).map(|(&c, &x)| c as f64 * x).sum();
            t.coeff as f64 * pm * ex.exp()
        })
        .sum()
}
