//! Dense matrices over a [`Field`]: rank, kernel and linear solves.
//!
//! Exact fields use Gauss-Jordan elimination. Complex doubles go through a
//! singular value decomposition, with numerical rank counted as the singular
//! values above `eps * sigma_max * max(rows, cols)`.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::scalar::{Field, GaussRational, C64};
use crate::tolerance::Tolerances;

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64s(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| F::from_i64(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = m.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_c64(&self) -> Matrix<C64> {
        self.map(Field::to_c64)
    }

    /// Reduced row echelon form and pivot columns (exact fields).
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..a.cols {
                    a.data.swap(p * a.cols + j, r * a.cols + j);
                }
            }
            let inv = a.get(r, c).inv();
            for j in c..a.cols {
                let v = a.get(r, j).clone() * inv.clone();
                a.set(r, j, v);
            }
            for i in 0..a.rows {
                if i == r || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in c..a.cols {
                    let v = a.get(i, j).clone() - f.clone() * a.get(r, j).clone();
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    /// Kernel of a matrix with rational entries by fraction-free
    /// Gauss-Jordan elimination over the integers. Same normalization as
    /// the `rref` path: each basis vector has a 1 at its free column.
    fn rational_kernel(&self) -> Option<Vec<Vec<F>>> {
        let entries: Vec<GaussRational> = self.data.iter().map(Field::as_gauss).collect::<Option<_>>()?;
        if entries.iter().any(|v| !v.im.is_zero()) {
            return None;
        }
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = &entries[i * self.cols..(i + 1) * self.cols];
                let l = row.iter().fold(BigInt::from(1), |acc, v| acc.lcm(v.re.denom()));
                row.iter().map(|v| (&v.re * BigRational::from_integer(l.clone())).to_integer()).collect()
            })
            .collect();
        let mut prev = BigInt::from(1);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(p, r);
            let piv = a[r][c].clone();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = a[i][c].clone();
                for j in 0..self.cols {
                    let v = (&piv * &a[i][j] - &f * &a[r][j]).div_floor(&prev);
                    a[i][j] = v;
                }
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        Some(
            free.iter()
                .map(|&f| {
                    let mut v = vec![F::zero(); self.cols];
                    v[f] = F::one();
                    for (i, &p) in pivots.iter().enumerate() {
                        v[p] = F::from_rational(&-BigRational::new(a[i][f].clone(), a[i][p].clone()));
                    }
                    v
                })
                .collect(),
        )
    }

    pub fn rank(&self, tol: &Tolerances) -> usize {
        if F::EXACT {
            self.rref().1.len()
        } else {
            Svd::new(&self.to_c64()).rank(tol.rank_eps)
        }
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn kernel(&self, tol: &Tolerances) -> Vec<Vec<F>> {
        if let Some(k) = self.rational_kernel() {
            return k;
        }
        if F::EXACT {
            let (r, pivots) = self.rref();
            let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
            free.iter()
                .map(|&f| {
                    let mut v = vec![F::zero(); self.cols];
                    v[f] = F::one();
                    for (i, &p) in pivots.iter().enumerate() {
                        v[p] = -r.get(i, f).clone();
                    }
                    v
                })
                .collect()
        } else {
            let svd = Svd::new(&self.to_c64());
            svd.kernel(tol.rank_eps)
                .into_iter()
                .map(|v| v.into_iter().map(|z| F::from_c64(z).expect("float field")).collect())
                .collect()
        }
    }

    /// A solution of `M x = b`. Exact fields return `None` for an
    /// inconsistent system; floats return the least-squares solution when
    /// its relative residual is within `tol.verify`.
    pub fn solve(&self, b: &[F], tol: &Tolerances) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        if F::EXACT {
            let mut aug = Self::zeros(self.rows, self.cols + 1);
            for i in 0..self.rows {
                for j in 0..self.cols {
                    aug.set(i, j, self.get(i, j).clone());
                }
                aug.set(i, self.cols, b[i].clone());
            }
            let (r, pivots) = aug.rref();
            if pivots.last() == Some(&self.cols) {
                return None;
            }
            let mut x = vec![F::zero(); self.cols];
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = r.get(i, self.cols).clone();
            }
            Some(x)
        } else {
            let a = self.to_c64();
            let bb: Vec<C64> = b.iter().map(Field::to_c64).collect();
            let x = Svd::new(&a).solve(&bb, tol.rank_eps);
            let ax = a.mul_vec(&x);
            let res = ax.iter().zip(&bb).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
            let scale = bb.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
            if res <= tol.verify * scale {
                Some(x.into_iter().map(|z| F::from_c64(z).expect("float field")).collect())
            } else {
                None
            }
        }
    }
}

/// Thin wrapper over nalgebra's complex SVD, padded so that the full right
/// singular basis is available.
pub struct Svd {
    rows: usize,
    cols: usize,
    sigma: Vec<f64>,
    /// Rows of `V^H` ordered like `sigma` (descending).
    v_h: Vec<Vec<C64>>,
    /// Columns of `U` ordered like `sigma`.
    u: Vec<Vec<C64>>,
}

impl Svd {
    pub fn new(m: &Matrix<C64>) -> Self {
        let rows = m.rows();
        let cols = m.cols();
        let padded = rows.max(cols);
        let mut a = DMatrix::<C64>::zeros(padded, cols);
        for i in 0..rows {
            for j in 0..cols {
                a[(i, j)] = *m.get(i, j);
            }
        }
        if cols == 0 {
            return Self { rows, cols, sigma: Vec::new(), v_h: Vec::new(), u: Vec::new() };
        }
        let (s, u, vt) = checked_svd(&a);
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
        Self {
            rows,
            cols,
            sigma: order.iter().map(|&i| s[i]).collect(),
            v_h: order.iter().map(|&i| (0..cols).map(|j| vt[(i, j)]).collect()).collect(),
            u: order.iter().map(|&i| (0..rows).map(|r| u[(r, i)]).collect()).collect(),
        }
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.sigma
    }

    fn cutoff(&self, eps: f64) -> f64 {
        let smax = self.sigma.first().copied().unwrap_or(0.0);
        eps * smax * self.rows.max(self.cols) as f64
    }

    pub fn rank(&self, eps: f64) -> usize {
        let smax = self.sigma.first().copied().unwrap_or(0.0);
        if smax == 0.0 {
            return 0;
        }
        let cut = self.cutoff(eps);
        self.sigma.iter().filter(|&&s| s > cut).count()
    }

    pub fn kernel(&self, eps: f64) -> Vec<Vec<C64>> {
        let r = self.rank(eps);
        self.v_h[r..].iter().map(|row| row.iter().map(|z| z.conj()).collect()).collect()
    }

    /// Minimum-norm least-squares solution.
    pub fn solve(&self, b: &[C64], eps: f64) -> Vec<C64> {
        let r = self.rank(eps);
        let mut x = vec![C64::new(0.0, 0.0); self.cols];
        for k in 0..r {
            let coef: C64 = self.u[k].iter().zip(b).map(|(u, bi)| u.conj() * bi).sum::<C64>() / self.sigma[k];
            for (j, xj) in x.iter_mut().enumerate() {
                *xj += self.v_h[k][j].conj() * coef;
            }
        }
        x
    }
}

type Factors = (nalgebra::DVector<f64>, DMatrix<C64>, DMatrix<C64>);

fn svd_factors(a: &DMatrix<C64>) -> Factors {
    let svd = a.clone().svd(true, true);
    (svd.singular_values, svd.u.expect("requested U"), svd.v_t.expect("requested V^T"))
}

fn reconstruction_error(a: &DMatrix<C64>, (s, u, vt): &Factors) -> f64 {
    let sd = DMatrix::from_diagonal(&s.map(|x| C64::new(x, 0.0)));
    (u * sd * vt - a).norm()
}

/// nalgebra's complex SVD occasionally stops with a visibly wrong
/// factorization, so the result is checked and recomputed from the adjoint
/// or a rotated copy when needed.
fn checked_svd(a: &DMatrix<C64>) -> Factors {
    let scale = a.norm().max(f64::MIN_POSITIVE);
    let good = 1e-12 * scale * (a.nrows() + a.ncols()) as f64;
    let mut best = svd_factors(a);
    let mut best_err = reconstruction_error(a, &best);
    if best_err <= good {
        return best;
    }
    let adjoint = {
        let (s, u, vt) = svd_factors(&a.adjoint());
        (s, vt.adjoint(), u.adjoint())
    };
    let mut candidates = vec![adjoint];
    for theta in [0.6435011087932844f64, 1.1071487177940904, 2.214297435588181] {
        let phase = C64::from_polar(1.0, theta);
        let (s, u, vt) = svd_factors(&(a * phase));
        candidates.push((s, u / phase, vt));
    }
    for c in candidates {
        let err = reconstruction_error(a, &c);
        if err < best_err {
            best = c;
            best_err = err;
        }
        if best_err <= good {
            break;
        }
    }
    best
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn rank_mod_p(rows: &[Vec<u64>], cols: usize, p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = rows.to_vec();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(piv, rank);
        let inv = pow_mod(a[rank][c], p - 2, p);
        for j in c..cols {
            a[rank][j] = mul_mod(a[rank][j], inv, p);
        }
        let pivot_row = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..cols {
                let sub = mul_mod(f, pivot_row[j], p);
                row[j] = if row[j] >= sub { row[j] - sub } else { row[j] + p - sub };
            }
        }
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    rank
}

/// Exact rank of an integer matrix by multi-modular elimination.
///
/// Any prime gives a lower bound. The rank is certified once the product of
/// the primes used exceeds the Hadamard bound on every minor one size larger
/// than the best modular rank seen.
pub fn integer_rank(rows: &[Vec<BigInt>]) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let full = nrows.min(ncols);
    if full == 0 {
        return 0;
    }
    let mut log_norms: Vec<f64> = rows
        .iter()
        .map(|r| {
            let sq: BigInt = r.iter().map(|v| v * v).sum();
            if sq.is_zero() {
                f64::NEG_INFINITY
            } else {
                0.5 * big_log2(&sq)
            }
        })
        .collect();
    log_norms.sort_by(|a, b| b.total_cmp(a));
    let mut best = 0usize;
    let mut bits = 0.0f64;
    let mut p = (1u64 << 62) - 1;
    loop {
        while !is_prime_u64(p) {
            p -= 2;
        }
        let pb = BigInt::from(p);
        let reduced: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|v| v.mod_floor(&pb).to_u64().expect("residue fits")).collect())
            .collect();
        best = best.max(rank_mod_p(&reduced, ncols, p));
        if best == full {
            return best;
        }
        bits += (p as f64).log2();
        let bound: f64 = log_norms.iter().take(best + 1).filter(|v| v.is_finite()).sum();
        if bits > bound + 1.0 {
            return best;
        }
        p -= 2;
    }
}

fn big_log2(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().map_or(bits as f64, |f| f.abs().log2());
    }
    let shift = bits - 60;
    let top: BigInt = v.abs() >> shift;
    top.to_f64().unwrap().log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = GaussRational;

    #[test]
    fn svd_reconstructs_hard_case() {
        // powers of the roots of an apolar quintic of a random octic
        #[rustfmt::skip]
        let rows = vec![vec![C64::new(4.3918922911622504e-8,-2.7540451110642698e-8),C64::new(0.9022960264684878,-0.43111701499613303),C64::new(0.3035447429549784,5.138744542980813e-63),C64::new(0.9022960264684878,0.43111701499613303),C64::new(4.3918922911622504e-8,2.7540451110642698e-8)],vec![C64::new(1.5891287899669604e-6,2.9787457510964622e-6),C64::new(0.5937479936748333,1.4443914738235715),C64::new(2.8186091881281348,4.175199474013834e-62),C64::new(0.5937479936748333,-1.4443914738235715),C64::new(1.5891287899669604e-6,-2.9787457510964622e-6)],vec![C64::new(-8.783235168021472e-5,3.9230623170384384e-5),C64::new(-1.0079096795041789,0.3500812931966177),C64::new(11.45051627035811,1.4538534935361173e-61),C64::new(-1.0079096795041789,-0.3500812931966177),C64::new(-8.783235168021472e-5,-3.9230623170384384e-5)],vec![C64::new(-0.0005371348608179248,-0.0014712307361490482),C64::new(-0.11455221141499504,-0.400505396617121),C64::new(26.581361658789305,2.8124936755485714e-61),C64::new(-0.11455221141499504,0.400505396617121),C64::new(-0.0005371348608179248,0.0014712307361490482)],vec![C64::new(0.01531693436135194,-0.004405196472691488),C64::new(0.0991324253491395,-0.022466364178444023),C64::new(38.56642633793535,3.264477766227221e-61),C64::new(0.0991324253491395,0.022466364178444023),C64::new(0.01531693436135194,0.004405196472691488)],vec![C64::new(0.02164100902647361,0.10151628765803031),C64::new(0.0026409453792011943,0.015652538860986817),C64::new(35.81142027733762,2.2734589973675117e-61),C64::new(0.0026409453792011943,-0.015652538860986817),C64::new(0.02164100902647361,-0.10151628765803031)],vec![C64::new(-0.41836186117158414,0.05896593962458426),C64::new(-0.0015397369269591291,0.00017229059636034643),C64::new(20.783261894728557,8.796056934407025e-62),C64::new(-0.0015397369269591291,-0.00017229059636034643),C64::new(-0.41836186117158414,-0.05896593962458426)],vec![C64::new(-0.06874413800040709,-0.9802966077607969),C64::new(-4.812119287435594e-6,-8.627886332891768e-5),C64::new(6.892357986677884,1.458519205748705e-62),C64::new(-4.812119287435594e-6,8.627886332891768e-5),C64::new(-0.06874413800040709,0.9802966077607969)],vec![C64::new(1.0,0.0),C64::new(2.1085663826533045e-6,0.0),C64::new(1.0,0.0),C64::new(2.1085663826533045e-6,0.0),C64::new(1.0,0.0)]];
        let m = Matrix::from_rows(rows);
        let svd = Svd::new(&m);
        assert_eq!(svd.rank(1e-10), 5);
        let x: Vec<C64> = (0..5).map(|j| C64::new(j as f64, 1.0)).collect();
        let b = m.mul_vec(&x);
        let y = svd.solve(&b, 1e-10);
        let err = x.iter().zip(&y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn identity_rank_and_kernel() {
        let t = Tolerances::default();
        let m = Matrix::<Q>::identity(3);
        assert_eq!(m.rank(&t), 3);
        assert!(m.kernel(&t).is_empty());
        let f = Matrix::<C64>::identity(3);
        assert_eq!(f.rank(&t), 3);
        assert!(f.kernel(&t).is_empty());
    }

    #[test]
    fn two_by_three_kernel() {
        let t = Tolerances::default();
        // rows of the catalecticant of 3x^2y + 9xy^2 + 7y^3 in binomial scaling
        let m = Matrix::<Q>::from_i64s(&[vec![0, 1, 3], vec![1, 3, 7]]);
        let k = m.kernel(&t);
        assert_eq!(k.len(), 1);
        let v = &k[0];
        let s = v[2].clone();
        let scaled: Vec<Q> = v.iter().map(|c| c.clone() / s.clone()).collect();
        assert_eq!(scaled, vec![Q::int(2), Q::int(-3), Q::int(1)]);
        let fk = m.to_c64().kernel(&t);
        assert_eq!(fk.len(), 1);
        let r = fk[0][0] / fk[0][2];
        assert!((r - C64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn product_of_factors_has_rank_four() {
        let t = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = Matrix::<Q>::from_rows((0..6).map(|_| (0..4).map(|_| Q::int(rng.random_range(-9..=9))).collect()).collect());
        let b = Matrix::<Q>::from_rows((0..4).map(|_| (0..6).map(|_| Q::int(rng.random_range(-9..=9))).collect()).collect());
        let m = a.mul(&b);
        assert_eq!(m.rank(&t), 4);
        assert_eq!(m.to_c64().rank(&t), 4);
        for v in m.kernel(&t) {
            assert!(m.mul_vec(&v).iter().all(Field::is_zero));
        }
    }

    #[test]
    fn exact_solve() {
        let t = Tolerances::default();
        let m = Matrix::<Q>::from_i64s(&[vec![1, 1], vec![1, 2], vec![1, 3]]);
        let x = m.solve(&[Q::int(0), Q::int(1), Q::int(2)], &t).unwrap();
        assert_eq!(x, vec![Q::int(-1), Q::int(1)]);
        assert!(m.solve(&[Q::int(0), Q::int(1), Q::int(3)], &t).is_none());
        let fx = m.to_c64().solve(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0)], &t).unwrap();
        assert!((fx[0] + 1.0).norm() < 1e-12 && (fx[1] - 1.0).norm() < 1e-12);
    }

    #[test]
    fn wide_float_kernel() {
        let t = Tolerances::default();
        let m = Matrix::<C64>::from_i64s(&[vec![1, 2, 3, 4]]);
        let k = m.kernel(&t);
        assert_eq!(k.len(), 3);
        for v in &k {
            assert!(m.mul_vec(v)[0].norm() < 1e-12);
        }
    }

    #[test]
    fn modular_rank_matches_rref() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let r = rng.random_range(1..8);
            let c = rng.random_range(1..8);
            let k = rng.random_range(1..=r.min(c));
            let a: Vec<Vec<i64>> = (0..r).map(|_| (0..k).map(|_| rng.random_range(-30..=30)).collect()).collect();
            let b: Vec<Vec<i64>> = (0..k).map(|_| (0..c).map(|_| rng.random_range(-30..=30)).collect()).collect();
            let m = Matrix::<Q>::from_i64s(&a).mul(&Matrix::from_i64s(&b));
            let ints: Vec<Vec<BigInt>> =
                m.to_rows().iter().map(|row| row.iter().map(|q| q.re.to_integer()).collect()).collect();
            assert_eq!(integer_rank(&ints), m.rank(&Tolerances::default()));
        }
    }

    #[test]
    fn fraction_free_kernel_matches_rref() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..200 {
            let r = rng.random_range(1..7);
            let c = rng.random_range(1..8);
            let k = rng.random_range(1..=r.min(c));
            let a = Matrix::<Q>::from_rows((0..r).map(|_| (0..k).map(|_| Q::ratio(rng.random_range(-9..=9), rng.random_range(1..=4))).collect()).collect());
            let b = Matrix::<Q>::from_rows((0..k).map(|_| (0..c).map(|_| Q::int(rng.random_range(-9..=9))).collect()).collect());
            let m = a.mul(&b);
            let (red, pivots) = m.rref();
            let reference: Vec<Vec<Q>> = (0..c)
                .filter(|f| !pivots.contains(f))
                .map(|f| {
                    let mut v = vec![Q::zero(); c];
                    v[f] = Q::one();
                    for (i, &p) in pivots.iter().enumerate() {
                        v[p] = -red.get(i, f).clone();
                    }
                    v
                })
                .collect();
            assert_eq!(m.rational_kernel().unwrap(), reference);
        }
    }

    #[test]
    fn primes() {
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64((1 << 62) - 1));
        assert!(is_prime_u64(2));
        assert!(!is_prime_u64(561));
    }
}
