use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::eig::{hermitian_eig, hermitian_eigenvalues};
use super::matrix::ComplexMatrix;
use crate::error::{GefError, Result};

/// Norm tolerance for pure states built in code.
pub const NORM_TOL: f64 = 1e-12;
pub const DENSITY_HERMITIAN_TOL: f64 = 1e-10;
pub const DENSITY_TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in [−NEGATIVITY_TOL, 0) are float noise; below that the
/// matrix is rejected.
pub const NEGATIVITY_TOL: f64 = 1e-9;

/// Local dimensions of each party, labelled A, B, C, D by position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PartyDims(Vec<usize>);

impl PartyDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(GefError::InvalidDims("no parties".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(GefError::InvalidDims(format!("party dimension {d} is below 2")));
        }
        Ok(Self(dims))
    }

    pub fn qubits(n: usize) -> Self {
        Self(vec![2; n])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn select(&self, subset: &Subset) -> PartyDims {
        PartyDims(subset.indices().iter().map(|&i| self.0[i]).collect())
    }

    pub fn is_qubits(&self) -> bool {
        self.0.iter().all(|&d| d == 2)
    }

    fn with_ancilla(&self, anc: usize) -> PartyDims {
        let mut dims = self.0.clone();
        dims.push(anc);
        PartyDims(dims)
    }
}

impl fmt::Display for PartyDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Ordered set of kept party positions (strictly increasing).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Subset(Vec<usize>);

impl Subset {
    pub fn new(indices: Vec<usize>, parties: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(GefError::InvalidSubset("empty subset".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GefError::InvalidSubset(format!(
                "indices {indices:?} are not strictly increasing"
            )));
        }
        if let Some(&i) = indices.iter().find(|&&i| i >= parties) {
            return Err(GefError::InvalidSubset(format!(
                "party {i} out of range for {parties} parties"
            )));
        }
        Ok(Self(indices))
    }

    /// Parses a label such as "AB" or "BCD".
    pub fn from_label(label: &str, parties: usize) -> Result<Self> {
        let mut idx: Vec<usize> = label
            .chars()
            .map(|c| match c {
                'A'..='Z' => Ok(c as usize - 'A' as usize),
                _ => Err(GefError::InvalidSubset(format!("bad party label {c:?}"))),
            })
            .collect::<Result<_>>()?;
        idx.sort_unstable();
        Self::new(idx, parties)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, party: usize) -> bool {
        self.0.contains(&party)
    }

    /// The parties not in this subset; `None` when nothing remains.
    pub fn complement(&self, parties: usize) -> Option<Subset> {
        let rest: Vec<usize> = (0..parties).filter(|i| !self.0.contains(i)).collect();
        (!rest.is_empty()).then_some(Subset(rest))
    }

    /// Position of each member party inside `outer`, for re-indexing a subset
    /// of a reduced state.
    pub fn relative_to(&self, outer: &Subset) -> Subset {
        Subset(
            self.0
                .iter()
                .map(|p| outer.0.iter().position(|q| q == p).expect("not a sub-subset"))
                .collect(),
        )
    }

    pub fn label(&self) -> String {
        self.0.iter().map(|&i| (b'A' + i as u8) as char).collect()
    }

    /// All subsets of `parties` with exactly `size` members, in
    /// lexicographic order.
    pub fn all_of_size(parties: usize, size: usize) -> Vec<Subset> {
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Subset>) {
            if cur.len() == k {
                out.push(Subset(cur.clone()));
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, parties, size, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Normalized state vector over the parties in `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    dims: PartyDims,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>, dims: PartyDims) -> Result<Self> {
        Self::with_tolerance(amplitudes, dims, NORM_TOL)
    }

    pub fn with_tolerance(amplitudes: Vec<Complex64>, dims: PartyDims, tol: f64) -> Result<Self> {
        check_len(amplitudes.len(), &dims)?;
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(GefError::NonFinite);
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > tol {
            return Err(GefError::NotNormalized(norm));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<Complex64>, dims: PartyDims) -> Result<Self> {
        check_len(amplitudes.len(), &dims)?;
        let n = norm(&amplitudes);
        if !(n > 0.0 && n.is_finite()) {
            return Err(GefError::NotNormalized(n));
        }
        for a in &mut amplitudes {
            *a /= n;
        }
        Ok(Self { amplitudes, dims })
    }

    /// Computational basis state with the given digit per party.
    pub fn basis(digits: &[usize], dims: PartyDims) -> Result<Self> {
        if digits.len() != dims.parties() || digits.iter().zip(dims.as_slice()).any(|(x, d)| x >= d) {
            return Err(GefError::InvalidDims(format!(
                "basis digits {digits:?} do not fit dims {dims}"
            )));
        }
        let idx = digits
            .iter()
            .zip(dims.as_slice())
            .fold(0, |acc, (&x, &d)| acc * d + x);
        let mut amps = vec![Complex64::new(0.0, 0.0); dims.total()];
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes: amps,
            dims,
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &PartyDims {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.parties()
    }

    /// Tensor product self ⊗ other.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.0.clone();
        dims.extend_from_slice(other.dims.as_slice());
        PureState {
            amplitudes: super::matrix::kron_vec(&self.amplitudes, &other.amplitudes),
            dims: PartyDims(dims),
        }
    }

    /// Applies a unitary on the full space.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<PureState> {
        if u.rows() != self.amplitudes.len() || !u.is_square() {
            return Err(GefError::Shape("unitary does not match state dimension".into()));
        }
        PureState::normalized(u.matvec(&self.amplitudes), self.dims.clone())
    }

    /// Reduced density matrix on `keep`, computed directly from amplitudes.
    pub fn reduced(&self, keep: &Subset) -> Result<DensityMatrix> {
        check_subset(keep, &self.dims)?;
        let layout = TraceLayout::new(&self.dims, keep);
        let k = layout.kept_dim;
        let mut out = ComplexMatrix::zeros(k, k);
        for t in 0..layout.traced_dim {
            let row = &layout.index[t * k..(t + 1) * k];
            for a in 0..k {
                let x = self.amplitudes[row[a]];
                if x.re == 0.0 && x.im == 0.0 {
                    continue;
                }
                for b in 0..k {
                    out[(a, b)] += x * self.amplitudes[row[b]].conj();
                }
            }
        }
        Ok(DensityMatrix {
            matrix: out,
            dims: self.dims.select(keep),
        })
    }

    pub fn overlap(&self, other: &PureState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Hermitian, unit-trace, positive semidefinite operator over `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: PartyDims,
}

impl DensityMatrix {
    /// Validates with the default tolerances.
    pub fn new(matrix: ComplexMatrix, dims: PartyDims) -> Result<Self> {
        Self::checked(
            matrix,
            dims,
            DENSITY_HERMITIAN_TOL,
            DENSITY_TRACE_TOL,
            NEGATIVITY_TOL,
        )
    }

    /// Validates with one tolerance for all three invariants, as used when
    /// loading state files.
    pub fn with_tolerance(matrix: ComplexMatrix, dims: PartyDims, tol: f64) -> Result<Self> {
        Self::checked(matrix, dims, tol, tol, tol.max(NEGATIVITY_TOL))
    }

    fn checked(
        matrix: ComplexMatrix,
        dims: PartyDims,
        herm_tol: f64,
        trace_tol: f64,
        neg_tol: f64,
    ) -> Result<Self> {
        if !matrix.is_square() {
            return Err(GefError::Shape("density matrix must be square".into()));
        }
        check_len(matrix.rows(), &dims)?;
        let report = validate_density(&matrix, herm_tol);
        if report.hermitian_defect > herm_tol {
            return Err(GefError::NotHermitian(report.hermitian_defect));
        }
        if report.trace_defect > trace_tol {
            return Err(GefError::InvalidDensity(format!(
                "trace defect {:.3e}",
                report.trace_defect
            )));
        }
        if report.min_eigenvalue < -neg_tol {
            return Err(GefError::InvalidDensity(format!(
                "negative eigenvalue {:.3e}",
                report.min_eigenvalue
            )));
        }
        Ok(Self {
            matrix: matrix.symmetrized(),
            dims,
        })
    }

    /// Convex combination Σ wᵢ ρᵢ of states sharing the same dims.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| GefError::InvalidDensity("empty mixture".into()))?;
        let dims = first.1.dims.clone();
        let n = dims.total();
        let mut acc = ComplexMatrix::zeros(n, n);
        for (w, rho) in parts {
            if rho.dims != dims {
                return Err(GefError::InvalidDims("mixture of different dims".into()));
            }
            acc = &acc + &rho.matrix.scale_real(*w);
        }
        Self::new(acc, dims)
    }

    pub fn maximally_mixed(dims: PartyDims) -> Self {
        let n = dims.total();
        DensityMatrix {
            matrix: ComplexMatrix::identity(n).scale_real(1.0 / n as f64),
            dims,
        }
    }

    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, dims: PartyDims) -> Self {
        Self { matrix, dims }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &PartyDims {
        &self.dims
    }

    pub fn parties(&self) -> usize {
        self.dims.parties()
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }

    /// Eigenvalues with float noise in [−NEGATIVITY_TOL, 0) clipped to 0.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        let vals = hermitian_eigenvalues(&self.matrix)?;
        clip_spectrum(vals)
    }

    /// Number of eigenvalues above `threshold`.
    pub fn rank(&self, threshold: f64) -> Result<usize> {
        Ok(self.spectrum()?.iter().filter(|&&l| l > threshold).count())
    }

    /// Tensor product self ⊗ other.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.0.clone();
        dims.extend_from_slice(other.dims.as_slice());
        DensityMatrix {
            matrix: super::matrix::kron(&self.matrix, &other.matrix),
            dims: PartyDims(dims),
        }
    }

    /// U ρ U†.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.rows() != self.dim() || !u.is_square() {
            return Err(GefError::Shape("unitary does not match state dimension".into()));
        }
        Ok(DensityMatrix {
            matrix: u.matmul(&self.matrix).matmul(&u.adjoint()).symmetrized(),
            dims: self.dims.clone(),
        })
    }
}

pub(crate) fn clip_spectrum(vals: Vec<f64>) -> Result<Vec<f64>> {
    vals.into_iter()
        .map(|l| {
            if l < -NEGATIVITY_TOL {
                Err(GefError::InvalidDensity(format!("negative eigenvalue {l:.3e}")))
            } else {
                Ok(l.max(0.0))
            }
        })
        .collect()
}

/// A pure or mixed state.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn dims(&self) -> &PartyDims {
        match self {
            State::Pure(p) => p.dims(),
            State::Mixed(m) => m.dims(),
        }
    }

    pub fn parties(&self) -> usize {
        self.dims().parties()
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, State::Pure(_))
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => pure_to_density(p),
            State::Mixed(m) => m.clone(),
        }
    }

    /// Reduced state on `keep`.
    pub fn reduced(&self, keep: &Subset) -> Result<DensityMatrix> {
        match self {
            State::Pure(p) => p.reduced(keep),
            State::Mixed(m) => partial_trace(m, keep),
        }
    }
}

impl From<PureState> for State {
    fn from(p: PureState) -> Self {
        State::Pure(p)
    }
}

impl From<DensityMatrix> for State {
    fn from(m: DensityMatrix) -> Self {
        State::Mixed(m)
    }
}

/// Per-invariant validation report for a candidate density matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub hermitian_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub hermitian_ok: bool,
    pub trace_ok: bool,
    pub positive_ok: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.hermitian_ok && self.trace_ok && self.positive_ok
    }
}

pub fn validate_density(m: &ComplexMatrix, tol: f64) -> ValidationReport {
    let hermitian_defect = m.hermitian_defect();
    let trace = m.trace();
    let trace_defect = (trace - Complex64::new(1.0, 0.0)).norm();
    let min_eigenvalue = if m.is_square() {
        hermitian_eigenvalues(&m.symmetrized())
            .ok()
            .and_then(|v| v.first().copied())
            .unwrap_or(f64::NEG_INFINITY)
    } else {
        f64::NEG_INFINITY
    };
    ValidationReport {
        hermitian_defect,
        trace_defect,
        min_eigenvalue,
        hermitian_ok: hermitian_defect <= tol,
        trace_ok: trace_defect <= tol,
        positive_ok: min_eigenvalue >= -tol,
    }
}

/// Precomputed index map from (traced index, kept index) to full index.
struct TraceLayout {
    kept_dim: usize,
    traced_dim: usize,
    index: Vec<usize>,
}

impl TraceLayout {
    fn new(dims: &PartyDims, keep: &Subset) -> Self {
        let d = dims.as_slice();
        let n = d.len();
        let kept_dim: usize = keep.indices().iter().map(|&i| d[i]).product();
        let total = dims.total();
        let traced_dim = total / kept_dim;
        let mut index = vec![0; total];
        let mut digits = vec![0usize; n];
        for full in 0..total {
            let mut rem = full;
            for p in (0..n).rev() {
                digits[p] = rem % d[p];
                rem /= d[p];
            }
            let (mut k, mut t) = (0, 0);
            for p in 0..n {
                if keep.contains(p) {
                    k = k * d[p] + digits[p];
                } else {
                    t = t * d[p] + digits[p];
                }
            }
            index[t * kept_dim + k] = full;
        }
        Self {
            kept_dim,
            traced_dim,
            index,
        }
    }
}

fn check_len(len: usize, dims: &PartyDims) -> Result<()> {
    if len != dims.total() {
        return Err(GefError::InvalidDims(format!(
            "dimension {len} does not match party dims {dims} (product {})",
            dims.total()
        )));
    }
    Ok(())
}

fn check_subset(keep: &Subset, dims: &PartyDims) -> Result<()> {
    if keep.is_empty() {
        return Err(GefError::InvalidSubset("empty subset".into()));
    }
    if let Some(&i) = keep.indices().iter().find(|&&i| i >= dims.parties()) {
        return Err(GefError::InvalidSubset(format!(
            "party {i} out of range for {} parties",
            dims.parties()
        )));
    }
    Ok(())
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Reduced state of `rho` on the parties in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &Subset) -> Result<DensityMatrix> {
    check_subset(keep, &rho.dims)?;
    if keep.len() == rho.parties() {
        return Ok(rho.clone());
    }
    let layout = TraceLayout::new(&rho.dims, keep);
    let k = layout.kept_dim;
    let mut out = ComplexMatrix::zeros(k, k);
    for t in 0..layout.traced_dim {
        let row = &layout.index[t * k..(t + 1) * k];
        for a in 0..k {
            for b in 0..k {
                out[(a, b)] += rho.matrix[(row[a], row[b])];
            }
        }
    }
    Ok(DensityMatrix {
        matrix: out,
        dims: rho.dims.select(keep),
    })
}

/// |ψ⟩⟨ψ|.
pub fn pure_to_density(psi: &PureState) -> DensityMatrix {
    DensityMatrix {
        matrix: ComplexMatrix::outer(&psi.amplitudes),
        dims: psi.dims.clone(),
    }
}

/// Eigenvalues below this count as zero when extracting the support.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Purification Σᵢ √λᵢ |eᵢ⟩ ⊗ |i⟩ onto an appended ancilla party.
///
/// The ancilla dimension is the rank of `rho`, padded to 2 because every
/// party carries at least two levels.
pub fn purify(rho: &DensityMatrix) -> Result<PureState> {
    let eig = hermitian_eig(rho.matrix())?;
    let support: Vec<usize> = (0..eig.values.len())
        .filter(|&i| eig.values[i] > SUPPORT_TOL)
        .collect();
    let anc = support.len().max(2);
    let d = rho.dim();
    let mut amps = vec![Complex64::new(0.0, 0.0); d * anc];
    for (slot, &i) in support.iter().enumerate() {
        let w = eig.values[i].sqrt();
        for r in 0..d {
            amps[r * anc + slot] = eig.vectors[(r, i)] * w;
        }
    }
    PureState::normalized(amps, rho.dims.with_ancilla(anc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![c(h), c(0.0), c(0.0), c(h)], PartyDims::qubits(2)).unwrap()
    }

    fn ghz3() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut a = vec![c(0.0); 8];
        a[0] = c(h);
        a[7] = c(h);
        PureState::new(a, PartyDims::qubits(3)).unwrap()
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let rho = pure_to_density(&bell());
        let a = partial_trace(&rho, &Subset::new(vec![0], 2).unwrap()).unwrap();
        let expect = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
        assert!(a.matrix().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn ghz_pair_marginal() {
        let rho = pure_to_density(&ghz3());
        let ab = partial_trace(&rho, &Subset::new(vec![0, 1], 3).unwrap()).unwrap();
        let expect = ComplexMatrix::from_real_diagonal(&[0.5, 0.0, 0.0, 0.5]);
        assert!(ab.matrix().max_abs_diff(&expect) < 1e-15);
        let direct = ghz3().reduced(&Subset::new(vec![0, 1], 3).unwrap()).unwrap();
        assert!(direct.matrix().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn bell_density_entries() {
        let rho = pure_to_density(&bell());
        let mut expect = ComplexMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            expect[(i, j)] = c(0.5);
        }
        assert!(rho.matrix().max_abs_diff(&expect) < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_zero_density() {
        let zero = PureState::basis(&[0], PartyDims::qubits(1)).unwrap();
        let rho = pure_to_density(&zero);
        assert_eq!(rho.matrix(), &ComplexMatrix::from_real_diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn middle_party_trace_ordering() {
        // |0⟩|1⟩|0⟩ with the middle party traced leaves |00⟩⟨00|
        let s = PureState::basis(&[0, 1, 0], PartyDims::qubits(3)).unwrap();
        let ac = s.reduced(&Subset::new(vec![0, 2], 3).unwrap()).unwrap();
        assert_eq!(ac.matrix()[(0, 0)], c(1.0));
        let s = PureState::basis(&[1, 0, 1], PartyDims::new(vec![2, 3, 2]).unwrap()).unwrap();
        let ac = s.reduced(&Subset::new(vec![0, 2], 3).unwrap()).unwrap();
        assert_eq!(ac.matrix()[(3, 3)], c(1.0));
    }

    #[test]
    fn subset_errors() {
        assert!(Subset::new(vec![], 3).is_err());
        assert!(Subset::new(vec![1, 0], 3).is_err());
        assert!(Subset::new(vec![3], 3).is_err());
        let rho = pure_to_density(&bell());
        let bad = Subset(vec![5]);
        assert!(partial_trace(&rho, &bad).is_err());
    }

    #[test]
    fn subset_labels_and_enumeration() {
        assert_eq!(Subset::from_label("BD", 4).unwrap().indices(), &[1, 3]);
        assert_eq!(Subset::new(vec![0, 2, 3], 4).unwrap().label(), "ACD");
        let pairs: Vec<String> = Subset::all_of_size(4, 2).iter().map(|s| s.label()).collect();
        assert_eq!(pairs, ["AB", "AC", "AD", "BC", "BD", "CD"]);
        let abc = Subset::from_label("ACD", 4).unwrap();
        let cd = Subset::from_label("CD", 4).unwrap();
        assert_eq!(cd.relative_to(&abc).indices(), &[1, 2]);
    }

    #[test]
    fn unnormalized_state_rejected() {
        let err = PureState::new(vec![c(1.0), c(1.0)], PartyDims::qubits(1));
        assert!(matches!(err, Err(GefError::NotNormalized(_))));
    }

    #[test]
    fn validation_reports() {
        let ok = validate_density(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5]), 1e-10);
        assert!(ok.is_valid());
        let bad_trace = validate_density(&ComplexMatrix::from_real_diagonal(&[0.6, 0.5]), 1e-10);
        assert!(!bad_trace.trace_ok && bad_trace.hermitian_ok && bad_trace.positive_ok);
        let neg = ComplexMatrix::from_vec(2, 2, vec![c(0.5), c(0.6), c(0.6), c(0.5)]).unwrap();
        let r = validate_density(&neg, 1e-10);
        // eigenvalues 0.5 ± 0.6
        assert!((r.min_eigenvalue + 0.1).abs() < 1e-12);
        assert!(!r.positive_ok && r.trace_ok);
        assert!(DensityMatrix::new(neg, PartyDims::qubits(1)).is_err());
    }

    #[test]
    fn purify_pure_and_mixed() {
        let zero = pure_to_density(&PureState::basis(&[0], PartyDims::qubits(1)).unwrap());
        let p = purify(&zero).unwrap();
        assert_eq!(p.dims().as_slice(), &[2, 2]);
        assert!((p.amplitudes()[0].norm() - 1.0).abs() < 1e-12);

        let mixed = DensityMatrix::maximally_mixed(PartyDims::qubits(1));
        let p = purify(&mixed).unwrap();
        let back = p.reduced(&Subset::new(vec![0], 2).unwrap()).unwrap();
        assert!(back.matrix().max_abs_diff(mixed.matrix()) < 1e-12);
        let anc = p.reduced(&Subset::new(vec![1], 2).unwrap()).unwrap();
        assert!(anc.matrix().max_abs_diff(mixed.matrix()) < 1e-12);
    }
}
