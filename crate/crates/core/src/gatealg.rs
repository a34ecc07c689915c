//! Symbolic algebra of Pauli, quadratic Clifford, and almost diagonal
//! Clifford gates, and of conjugate tuples built from them.
//!
//! Gates are kept in the normal form `ω^c D_Φ Z^p X^q` with the diagonal
//! part leftmost. Phases are tracked exactly as exponents of `ω`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modring::{dot, FpElem, Modulus};
use crate::symplectic::{complete_symplectic_basis, extend_to_semibasis, rank_and_kernel, FpMatrix, SympVec};

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

fn add_vec(a: &[FpElem], b: &[FpElem]) -> Vec<FpElem> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

/// `ω^c Z^p X^q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOp {
    pub c: FpElem,
    pub p: Vec<FpElem>,
    pub q: Vec<FpElem>,
}

impl PauliOp {
    pub fn identity(m: Modulus, n: usize) -> Self {
        PauliOp { c: m.zero(), p: vec![m.zero(); n], q: vec![m.zero(); n] }
    }

    pub fn from_i64(m: Modulus, c: i64, p: &[i64], q: &[i64]) -> Result<Self> {
        check_len(p.len(), q.len())?;
        Ok(PauliOp {
            c: m.elem(c),
            p: p.iter().map(|&x| m.elem(x)).collect(),
            q: q.iter().map(|&x| m.elem(x)).collect(),
        })
    }

    /// `Z_i` (0-based qudit index).
    pub fn z(m: Modulus, n: usize, i: usize) -> Self {
        let mut op = PauliOp::identity(m, n);
        op.p[i] = m.one();
        op
    }

    /// `X_i` (0-based qudit index).
    pub fn x(m: Modulus, n: usize, i: usize) -> Self {
        let mut op = PauliOp::identity(m, n);
        op.q[i] = m.one();
        op
    }

    pub fn modulus(&self) -> Modulus {
        self.c.modulus()
    }

    pub fn qudits(&self) -> usize {
        self.p.len()
    }

    /// Exponent vector in interleaved layout.
    pub fn exponents(&self) -> SympVec {
        SympVec::from_blocks(&self.p, &self.q).expect("equal block lengths")
    }
}

/// Normal-ordered product: `X^{q1} Z^{p2} = ω^{-q1·p2} Z^{p2} X^{q1}`.
pub fn pauli_mul(a: &PauliOp, b: &PauliOp) -> Result<PauliOp> {
    check_len(a.qudits(), b.qudits())?;
    Ok(PauliOp { c: a.c + b.c - dot(&a.q, &b.p), p: add_vec(&a.p, &b.p), q: add_vec(&a.q, &b.q) })
}

/// Symmetric `n × n` matrix over `Z_d` stored by its free entries: the `n`
/// diagonal entries, then for each `i < j` the doubled off-diagonal entry
/// `2Φ_ij`. For `n = 2` this is `(Φ_1, Φ_2, Φ_3)` of
/// `[[Φ_1, Φ_3/2], [Φ_3/2, Φ_2]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymMat {
    n: usize,
    entries: Vec<FpElem>,
}

impl SymMat {
    pub fn zero(m: Modulus, n: usize) -> Self {
        SymMat { n, entries: vec![m.zero(); n * (n + 1) / 2] }
    }

    pub fn new(n: usize, entries: Vec<FpElem>) -> Result<Self> {
        check_len(n * (n + 1) / 2, entries.len())?;
        Ok(SymMat { n, entries })
    }

    pub fn from_i64(m: Modulus, n: usize, entries: &[i64]) -> Result<Self> {
        SymMat::new(n, entries.iter().map(|&e| m.elem(e)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[FpElem] {
        &self.entries
    }

    pub fn modulus(&self) -> Modulus {
        self.entries[0].modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    fn off_index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        // offset of pair (i, j) among pairs in lexicographic order
        self.n + i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    /// The matrix entry `Φ_ij`, halving the stored off-diagonal value.
    pub fn entry(&self, i: usize, j: usize) -> FpElem {
        if i == j {
            self.entries[i]
        } else {
            self.entries[self.off_index(i, j)].half()
        }
    }

    /// `z^t Φ z = Σ Φ_ii z_i² + Σ_{i<j} 2Φ_ij z_i z_j`.
    pub fn quad_form(&self, z: &[FpElem]) -> FpElem {
        let m = self.modulus();
        let mut acc = m.zero();
        for i in 0..self.n {
            acc += self.entries[i] * z[i] * z[i];
            for j in i + 1..self.n {
                acc += self.entries[self.off_index(i, j)] * z[i] * z[j];
            }
        }
        acc
    }

    /// `Φ q`.
    pub fn apply(&self, q: &[FpElem]) -> Vec<FpElem> {
        (0..self.n).map(|i| (0..self.n).fold(self.modulus().zero(), |acc, j| acc + self.entry(i, j) * q[j])).collect()
    }

    /// `2 Φ q`, computed without halving.
    pub fn doubled_apply(&self, q: &[FpElem]) -> Vec<FpElem> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(self.modulus().zero(), |acc, j| {
                    let e = if i == j { self.entries[i] + self.entries[i] } else { self.entries[self.off_index(i, j)] };
                    acc + e * q[j]
                })
            })
            .collect()
    }

    pub fn add(&self, other: &SymMat) -> SymMat {
        assert_eq!(self.n, other.n);
        SymMat { n: self.n, entries: add_vec(&self.entries, &other.entries) }
    }

    pub fn scale(&self, s: FpElem) -> SymMat {
        SymMat { n: self.n, entries: self.entries.iter().map(|&e| e * s).collect() }
    }

    pub fn neg(&self) -> SymMat {
        self.scale(-self.modulus().one())
    }
}

/// `D_Φ P D_Φ* = ω^{c − q^tΦq} Z^{p + 2Φq} X^q` for `P = ω^c Z^p X^q`.
///
/// From `D_Φ X^q D_Φ* |z⟩ = ω^{Q(z+q) − Q(z)} |z+q⟩` with
/// `Q(z+q) − Q(z) = 2 z^tΦq + Q(q)`, then normal ordering
/// `X^q Z^{2Φq} = ω^{-2Q(q)} Z^{2Φq} X^q`.
pub fn conj_pauli_by_quad(phi: &SymMat, pauli: &PauliOp) -> Result<PauliOp> {
    check_len(phi.n(), pauli.qudits())?;
    Ok(PauliOp {
        c: pauli.c - phi.quad_form(&pauli.q),
        p: add_vec(&pauli.p, &phi.doubled_apply(&pauli.q)),
        q: pauli.q.clone(),
    })
}

/// `D_Φ · P`, with the global phase stored in the Pauli part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlmostDiagClifford {
    pub phi: SymMat,
    pub pauli: PauliOp,
}

impl AlmostDiagClifford {
    pub fn identity(m: Modulus, n: usize) -> Self {
        AlmostDiagClifford { phi: SymMat::zero(m, n), pauli: PauliOp::identity(m, n) }
    }

    pub fn from_pauli(pauli: PauliOp) -> Self {
        AlmostDiagClifford { phi: SymMat::zero(pauli.modulus(), pauli.qudits()), pauli }
    }

    pub fn new(phi: SymMat, pauli: PauliOp) -> Result<Self> {
        check_len(phi.n(), pauli.qudits())?;
        Ok(AlmostDiagClifford { phi, pauli })
    }

    pub fn c(&self) -> FpElem {
        self.pauli.c
    }

    pub fn p(&self) -> &[FpElem] {
        &self.pauli.p
    }

    pub fn q(&self) -> &[FpElem] {
        &self.pauli.q
    }

    pub fn modulus(&self) -> Modulus {
        self.pauli.modulus()
    }

    pub fn qudits(&self) -> usize {
        self.pauli.qudits()
    }

    pub fn is_pauli(&self) -> bool {
        self.phi.is_zero()
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> AlmostDiagClifford {
        let mut acc = AlmostDiagClifford::identity(self.modulus(), self.qudits());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = almost_diag_mul(&acc, &base).expect("same dimensions");
            }
            base = almost_diag_mul(&base, &base).expect("same dimensions");
            k >>= 1;
        }
        acc
    }
}

/// `D_{Φa} Pa · D_{Φb} Pb = D_{Φa+Φb} (D_{Φb}* Pa D_{Φb}) Pb`.
pub fn almost_diag_mul(a: &AlmostDiagClifford, b: &AlmostDiagClifford) -> Result<AlmostDiagClifford> {
    check_len(a.qudits(), b.qudits())?;
    let moved = conj_pauli_by_quad(&b.phi.neg(), &a.pauli)?;
    Ok(AlmostDiagClifford { phi: a.phi.add(&b.phi), pauli: pauli_mul(&moved, &b.pauli)? })
}

/// The images `(U_1, V_1, ..., U_n, V_n)` of `(Z_1, X_1, ..., Z_n, X_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConjugateTuple {
    gates: Vec<AlmostDiagClifford>,
}

impl ConjugateTuple {
    pub fn new(gates: Vec<AlmostDiagClifford>) -> Result<Self> {
        let n = gates.first().map_or(0, |g| g.qudits());
        check_len(2 * n, gates.len())?;
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 2, got: 0 });
        }
        let m = gates[0].modulus();
        for g in &gates {
            check_len(n, g.qudits())?;
            if g.modulus() != m {
                return Err(Error::ModulusMismatch(m.value(), g.modulus().value()));
            }
        }
        Ok(ConjugateTuple { gates })
    }

    /// `(Z_1, X_1, ..., Z_n, X_n)`: the tuple of the identity gate.
    pub fn identity(m: Modulus, n: usize) -> Self {
        let gates = (0..n)
            .flat_map(|i| {
                [
                    AlmostDiagClifford::from_pauli(PauliOp::z(m, n, i)),
                    AlmostDiagClifford::from_pauli(PauliOp::x(m, n, i)),
                ]
            })
            .collect();
        ConjugateTuple { gates }
    }

    pub fn gates(&self) -> &[AlmostDiagClifford] {
        &self.gates
    }

    pub fn gate(&self, i: usize) -> &AlmostDiagClifford {
        &self.gates[i]
    }

    pub fn gates_mut(&mut self) -> &mut [AlmostDiagClifford] {
        &mut self.gates
    }

    pub fn qudits(&self) -> usize {
        self.gates.len() / 2
    }

    pub fn modulus(&self) -> Modulus {
        self.gates[0].modulus()
    }

    pub fn to_json(&self) -> TupleJson {
        TupleJson {
            d: self.modulus().value(),
            n: self.qudits(),
            gates: self
                .gates
                .iter()
                .map(|g| GateJson {
                    c: g.c().value(),
                    phi: g.phi.entries().iter().map(|e| e.value()).collect(),
                    p: g.p().iter().map(|e| e.value()).collect(),
                    q: g.q().iter().map(|e| e.value()).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(doc: &TupleJson) -> Result<Self> {
        let m = Modulus::new(doc.d as u64)?;
        let to = |v: &[u32]| v.iter().map(|&x| m.elem(x as i64)).collect::<Vec<_>>();
        let gates = doc
            .gates
            .iter()
            .map(|g| {
                check_len(doc.n, g.p.len())?;
                check_len(doc.n, g.q.len())?;
                let phi = SymMat::new(doc.n, to(&g.phi))?;
                AlmostDiagClifford::new(phi, PauliOp { c: m.elem(g.c as i64), p: to(&g.p), q: to(&g.q) })
            })
            .collect::<Result<Vec<_>>>()?;
        ConjugateTuple::new(gates)
    }
}

/// Wire format: `{"d":3,"n":2,"gates":[{"c":0,"phi":[0,0,0],"p":[1,0],"q":[0,0]}, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleJson {
    pub d: u32,
    pub n: usize,
    pub gates: Vec<GateJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateJson {
    pub c: u32,
    pub phi: Vec<u32>,
    pub p: Vec<u32>,
    pub q: Vec<u32>,
}

/// `U_1^{w_1} V_1^{w_2} U_2^{w_3} V_2^{w_4} ...` in that fixed order.
pub fn word(t: &ConjugateTuple, w: &SympVec) -> Result<AlmostDiagClifford> {
    check_len(t.gates.len(), w.len())?;
    let m = t.modulus();
    let mut acc = AlmostDiagClifford::identity(m, t.qudits());
    for (g, e) in t.gates.iter().zip(w.coords()) {
        if !e.is_zero() {
            acc = almost_diag_mul(&acc, &g.pow(e.value() as u64))?;
        }
    }
    Ok(acc)
}

/// `c_ij` for the 0-based pair `(i, j)`: 1 on `(U_k, V_k)` pairs, else 0.
pub fn pair_constant(i: usize, j: usize) -> i64 {
    if i.is_multiple_of(2) && j == i + 1 {
        1
    } else {
        0
    }
}

/// Checks the third-level system for a two-qudit tuple: for all `i < j`,
/// `Φ_i q_j = Φ_j q_i` and
/// `q_i^tΦ_j q_i − q_j^tΦ_i q_j + p_i·q_j − p_j·q_i = c_ij`.
pub fn tuple_satisfies_polyeqns(t: &ConjugateTuple) -> bool {
    if t.qudits() != 2 {
        return false;
    }
    let m = t.modulus();
    let g = &t.gates;
    for i in 0..4 {
        for j in i + 1..4 {
            if g[i].phi.apply(g[j].q()) != g[j].phi.apply(g[i].q()) {
                return false;
            }
            let lhs = g[j].phi.quad_form(g[i].q()) - g[i].phi.quad_form(g[j].q()) + dot(g[i].p(), g[j].q())
                - dot(g[j].p(), g[i].q());
            if lhs != m.elem(pair_constant(i, j)) {
                return false;
            }
        }
    }
    true
}

/// The `3 × 4` matrix whose column `i` is `(Φ_i1, Φ_i2, Φ_i3)`.
pub fn phi_coefficient_matrix(t: &ConjugateTuple) -> Result<FpMatrix> {
    check_len(2, t.qudits())?;
    let mut mat = FpMatrix::zeros(t.modulus(), 3, 4);
    for (col, g) in t.gates.iter().enumerate() {
        for (row, e) in g.phi.entries().iter().enumerate() {
            mat.set(row, col, *e);
        }
    }
    Ok(mat)
}

/// First nonzero kernel vector of `mat` in scan order (first coordinate
/// fastest), found by enumerating the kernel.
pub fn first_kernel_vector(mat: &FpMatrix) -> Option<SympVec> {
    let (_, basis) = rank_and_kernel(mat);
    let d = mat.modulus();
    let cols = mat.cols();
    let k = basis.len();
    let mut best: Option<SympVec> = None;
    let total = (d.value() as u64).pow(k as u32);
    for mut idx in 1..total {
        let mut v = vec![d.zero(); cols];
        for b in &basis {
            let coef = d.elem((idx % d.value() as u64) as i64);
            idx /= d.value() as u64;
            for (x, y) in v.iter_mut().zip(b) {
                *x += coef * *y;
            }
        }
        let v = SympVec::new(v).expect("even length");
        if best.as_ref().is_none_or(|b| v.scan_key() < b.scan_key()) {
            best = Some(v);
        }
    }
    best
}

/// Rewrites a valid two-qudit tuple so that its first element is a Pauli.
///
/// Picks the first nonzero `w` with `Σ w_i Φ_i = 0`, extends it to a
/// Lagrangian semibasis `{w, w'}`, completes to a symplectic basis
/// `(w, w*, w', w'*)`, and returns the words of `t` on those four vectors.
pub fn phi1_reduce(t: &ConjugateTuple) -> Result<ConjugateTuple> {
    if !tuple_satisfies_polyeqns(t) {
        return Err(Error::InvalidTuple);
    }
    let mat = phi_coefficient_matrix(t)?;
    // four vectors in a three-dimensional space: the kernel is nontrivial
    let w = first_kernel_vector(&mat).ok_or(Error::InvalidTuple)?;
    let w2 = extend_to_semibasis(&w)?;
    let (a, a_star, b, b_star) = complete_symplectic_basis(&w, &w2)?;
    let gates = [a, a_star, b, b_star].iter().map(|v| word(t, v)).collect::<Result<Vec<_>>>()?;
    ConjugateTuple::new(gates)
}
