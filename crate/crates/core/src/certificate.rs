//! Versioned JSON certificates that can be checked without rerunning the
//! algorithm that produced them.
//!
//! Scalars are strings: exact values as `3/7` or `1+2i`, floats in decimal.
//! Coefficient vectors follow the lex-descending monomial order.

use serde::{Deserialize, Serialize};

use crate::decomposition::{Decomposition, PowerSum};
use crate::error::{Error, Result};
use crate::parse::parse_constant;
use crate::poly::{default_names, monomials, BinaryForm, LinearSubstitution, MultiForm};
use crate::scalar::{scalar_string, Field, GaussRational, Mode, C64};
use crate::sextic::CubesCertificate;
use crate::structured::CanonicalForm;
use crate::tolerance::Tolerances;

type Q = GaussRational;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    /// `Σ mu_j q_j^exponent`.
    PowerSum,
    /// A three-cubes certificate of a sextic, a power sum with its provenance.
    SexticCubes,
    /// `Σ_j y^(jd) scale_j base_j^(k-j)`.
    Canonical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertTerm {
    pub mu: String,
    pub q: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertPart {
    pub power: u32,
    pub scale: String,
    pub base: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: u32,
    pub kind: CertKind,
    pub mode: Mode,
    pub variables: Vec<String>,
    pub degree: u32,
    /// Coefficients of the input form.
    pub input: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub terms: Vec<CertTerm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    /// Rows of the coordinate changes applied to the input, in order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub substitutions: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shear: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<CertPart>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub mode: Mode,
    pub residual: f64,
}

fn strings<F: Field>(v: &[F]) -> Vec<String> {
    v.iter().map(scalar_string).collect()
}

fn form_coeffs<F: Field>(f: &MultiForm<F>) -> Vec<String> {
    monomials(f.nvars(), f.degree()).iter().map(|e| scalar_string(&f.coeff(e))).collect()
}

fn mode_of<F: Field>() -> Mode {
    if F::EXACT {
        Mode::Exact
    } else {
        Mode::Float
    }
}

fn power_sum_terms<F: Field>(p: &PowerSum<F>) -> Vec<CertTerm> {
    let cols = monomials(p.nvars, p.base_degree);
    p.terms
        .iter()
        .map(|t| CertTerm { mu: scalar_string(&t.coef), q: cols.iter().map(|e| scalar_string(&t.base.coeff(e))).collect() })
        .collect()
}

impl Certificate {
    fn bare(kind: CertKind, mode: Mode, input: &MultiForm<Q>, variables: Option<Vec<String>>) -> Self {
        Self {
            schema: SCHEMA,
            kind,
            mode,
            variables: variables.unwrap_or_else(|| default_names(input.nvars())),
            degree: input.degree(),
            input: form_coeffs(input),
            exponent: None,
            base_degree: None,
            terms: Vec::new(),
            branch: None,
            substitutions: None,
            shear: None,
            k: None,
            d: None,
            parts: Vec::new(),
            residual: 0.0,
        }
    }

    pub fn power_sum(input: &MultiForm<Q>, dec: &Decomposition, variables: Option<Vec<String>>) -> Self {
        let mode = if dec.is_exact() { Mode::Exact } else { Mode::Float };
        let mut c = Self::bare(CertKind::PowerSum, mode, input, variables);
        c.exponent = Some(dec.exponent());
        c.base_degree = Some(dec.base_degree());
        c.terms = match dec {
            Decomposition::Exact(p) => power_sum_terms(p),
            Decomposition::Float(p) => power_sum_terms(p),
        };
        c.residual = dec.residual(input);
        c
    }

    pub fn sextic_cubes(p: &BinaryForm<Q>, cert: &CubesCertificate) -> Self {
        let mut c = Self::power_sum(&p.to_multi(), &cert.terms, None);
        c.kind = CertKind::SexticCubes;
        c.branch = Some(cert.branch.name().to_string());
        c.substitutions = Some(cert.substitutions.iter().map(|s| s.rows().iter().map(|r| strings(r)).collect()).collect());
        c.shear = cert.shear.as_ref().map(scalar_string);
        c
    }

    pub fn canonical<F: Field>(p: &BinaryForm<Q>, cf: &CanonicalForm<F>) -> Self {
        let mut c = Self::bare(CertKind::Canonical, mode_of::<F>(), &p.to_multi(), None);
        c.k = Some(cf.k);
        c.d = Some(cf.d);
        c.parts = cf
            .parts
            .iter()
            .map(|part| CertPart { power: part.power, scale: scalar_string(&part.scale), base: strings(part.base.coeffs()) })
            .collect();
        c.residual = cf.reconstruct().to_c64().relative_distance(&p.to_c64());
        c
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s).map_err(|e| Error::Parse { pos: e.column(), msg: e.to_string() })?;
        if c.schema != SCHEMA {
            return Err(Error::precondition(format!("unsupported certificate schema {}", c.schema)));
        }
        Ok(c)
    }

    fn input_form(&self) -> Result<MultiForm<Q>> {
        let n = self.variables.len();
        read_form(n, self.degree, &self.input, parse_constant)
    }

    /// Recomputes the expansion from the stored data and compares it with the
    /// stored input.
    pub fn verify(&self, tol: &Tolerances) -> Result<VerifyReport> {
        let input = self.input_form()?;
        match self.mode {
            Mode::Exact => self.check::<Q>(&input, parse_constant, tol),
            Mode::Float => self.check::<C64>(&input.to_c64(), |s| Ok(parse_constant(s)?.to_c64()), tol),
        }
    }

    fn check<F: Field>(&self, input: &MultiForm<F>, read: impl Fn(&str) -> Result<F> + Copy, tol: &Tolerances) -> Result<VerifyReport> {
        let n = self.variables.len();
        let expanded = match self.kind {
            CertKind::PowerSum | CertKind::SexticCubes => {
                let (e, bd) = self.exponent.zip(self.base_degree).ok_or_else(|| Error::precondition("missing exponent or base degree"))?;
                if e * bd != self.degree {
                    return Err(Error::DegreeMismatch { left: e * bd, right: self.degree });
                }
                if let Some(subs) = &self.substitutions {
                    for s in subs {
                        let rows = s.iter().map(|r| r.iter().map(|x| parse_constant(x)).collect()).collect::<Result<Vec<Vec<Q>>>>()?;
                        LinearSubstitution::new_invertible(rows)?;
                    }
                }
                let mut p = PowerSum::new(n, bd, e);
                for t in &self.terms {
                    p.push(read(&t.mu)?, read_form(n, bd, &t.q, read)?);
                }
                p.expand()
            }
            CertKind::Canonical => {
                let (k, d) = self.k.zip(self.d).ok_or_else(|| Error::precondition("missing k or d"))?;
                if n != 2 || k * d != self.degree || self.parts.len() != k as usize {
                    return Err(Error::precondition("malformed canonical certificate"));
                }
                let mut acc = BinaryForm::zero(k * d);
                for (j, part) in self.parts.iter().enumerate() {
                    if part.power != k - j as u32 || part.base.len() != d as usize + 1 {
                        return Err(Error::precondition(format!("malformed canonical part {j}")));
                    }
                    let base = BinaryForm::new(part.base.iter().map(|s| read(s)).collect::<Result<Vec<F>>>()?);
                    acc = acc.try_add(&base.pow(part.power).scale(&read(&part.scale)?).mul_y_pow(j as u32 * d))?;
                }
                acc.to_multi()
            }
        };
        let residual = expanded.relative_distance(input);
        let ok = if F::EXACT { expanded == *input } else { residual <= tol.verify };
        Ok(VerifyReport { ok, mode: self.mode, residual })
    }
}

fn read_form<F: Field>(n: usize, degree: u32, coeffs: &[String], read: impl Fn(&str) -> Result<F>) -> Result<MultiForm<F>> {
    let cols = monomials(n, degree);
    if cols.len() != coeffs.len() {
        return Err(Error::DimensionMismatch(format!("{} coefficients for {} monomials", coeffs.len(), cols.len())));
    }
    let terms = cols.into_iter().zip(coeffs).map(|(e, s)| Ok((e, read(s)?))).collect::<Result<Vec<_>>>()?;
    MultiForm::from_terms(n, degree, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apolarity::sylvester_decompose;
    use crate::sextic::three_cubes;
    use crate::structured::{canonical_form, CanonicalVariant};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn exact_round_trip() {
        let p = BinaryForm::from_i64s(&[1, 3, -3, -11, 9, 21, -1]);
        let cert = Certificate::sextic_cubes(&p, &three_cubes(&p, &tol()).unwrap());
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        let r = back.verify(&tol()).unwrap();
        assert!(r.ok && r.mode == Mode::Exact && r.residual == 0.0);
    }

    #[test]
    fn float_round_trip() {
        let p = BinaryForm::from_i64s(&[5, 0, -3, 2]);
        let dec = sylvester_decompose(&p, &tol()).unwrap();
        assert!(!dec.is_exact());
        let cert = Certificate::power_sum(&p.to_multi(), &dec, None);
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert!(back.verify(&tol()).unwrap().ok);
    }

    #[test]
    fn tampering_is_detected() {
        let p = BinaryForm::from_i64s(&[0, 6, 0, 0]);
        let dec = sylvester_decompose(&p, &tol()).unwrap();
        let mut cert = Certificate::power_sum(&p.to_multi(), &dec, None);
        cert.terms[0].mu = format!("{}+1", cert.terms[0].mu);
        assert!(!cert.verify(&tol()).unwrap().ok);
        cert.schema = 2;
        assert!(Certificate::from_json(&cert.to_json()).is_err());
    }

    #[test]
    fn canonical_round_trip() {
        let p = BinaryForm::from_i64s(&[2, -1, 3, 5, 0, 7, -4, 1, 9]);
        let cf = canonical_form(&p, 4, 2, CanonicalVariant::Unique).unwrap();
        let cert = Certificate::canonical(&p, &cf);
        assert!(Certificate::from_json(&cert.to_json()).unwrap().verify(&tol()).unwrap().ok);
    }
}
