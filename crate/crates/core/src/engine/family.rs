use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;

/// Finitely supported map from `{1..r}^d` to `alpha × alpha` complex matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientFamily {
    d: usize,
    r: usize,
    alpha: usize,
    entries: BTreeMap<Vec<usize>, CMat>,
}

fn check_tuple(k: &[usize], d: usize, r: usize) -> Result<()> {
    if k.len() != d {
        return Err(Error::IndexRange(format!("index tuple {k:?} should have length {d}")));
    }
    if let Some(&bad) = k.iter().find(|&&x| x == 0 || x > r) {
        return Err(Error::IndexRange(format!("index {bad} in {k:?} not in 1..={r}")));
    }
    Ok(())
}

impl CoefficientFamily {
    pub fn new(d: usize, r: usize, alpha: usize) -> Result<Self> {
        if d == 0 || r == 0 || alpha == 0 {
            return Err(Error::Config(format!(
                "d, r and alpha must be positive (d={d}, r={r}, alpha={alpha})"
            )));
        }
        Ok(CoefficientFamily {
            d,
            r,
            alpha,
            entries: BTreeMap::new(),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn insert(&mut self, k: Vec<usize>, a: CMat) -> Result<()> {
        check_tuple(&k, self.d, self.r)?;
        if a.nrows() != self.alpha || a.ncols() != self.alpha {
            return Err(Error::Dimension {
                dim: a.nrows().max(a.ncols()),
                cap: self.alpha,
            });
        }
        self.entries.insert(k, a);
        Ok(())
    }

    pub fn get(&self, k: &[usize]) -> Option<&CMat> {
        self.entries.get(k)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &CMat)> {
        self.entries.iter()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// Mixed-radix code of a 1-based tuple, first letter most significant.
    pub fn code(&self, k: &[usize]) -> usize {
        k.iter().fold(0, |acc, &x| acc * self.r + (x - 1))
    }

    /// Dense table indexed by [`Self::code`].
    pub fn dense_table(&self) -> Vec<Option<CMat>> {
        let mut out = vec![None; self.r.pow(self.d as u32)];
        for (k, a) in &self.entries {
            out[self.code(k)] = Some(a.clone());
        }
        out
    }

    /// `ã_k = a_{(k_d, ..., k_1)}`.
    pub fn flip(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(k, a)| (k.iter().rev().copied().collect(), a.clone()))
            .collect();
        CoefficientFamily { entries, ..*self }
    }

    /// `Σ_k Tr(a_k a_k^*)`.
    pub fn frobenius_sq(&self) -> f64 {
        self.entries.values().map(|a| a.norm_squared()).sum()
    }

    /// True when some supported tuple has two equal adjacent letters.
    pub fn has_adjacent_repeat(&self) -> bool {
        self.entries.keys().any(|k| k.windows(2).any(|w| w[0] == w[1]))
    }

    pub fn zero_like(&self) -> Self {
        CoefficientFamily {
            entries: BTreeMap::new(),
            ..*self
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("family d={} r={} alpha={}\n", self.d, self.r, self.alpha);
        for (k, a) in &self.entries {
            s.push_str(&join_tuple(k));
            write_matrix(&mut s, a);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        match parse_text(text)? {
            Parsed::Plain(f) => Ok(f),
            Parsed::Star(_) => Err(Error::Parse("expected an unstarred family".into())),
        }
    }
}

fn join_tuple(k: &[usize]) -> String {
    k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn write_matrix(s: &mut String, a: &CMat) {
    s.push_str(" :");
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let z = a[(i, j)];
            let _ = write!(s, " {:e},{:e}", z.re, z.im);
        }
    }
    s.push('\n');
}

/// Letter code of `(k, ε)` in the doubled alphabet: `2(k - 1) + [ε = *] + 1`.
pub fn star_code(k: usize, star: bool) -> usize {
    2 * (k - 1) + usize::from(star) + 1
}

pub fn star_decode(code: usize) -> (usize, bool) {
    ((code - 1) / 2 + 1, (code - 1) % 2 == 1)
}

/// Family indexed by `({1..r} × {1,*})^d`, stored over the doubled alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct StarCoefficientFamily {
    r: usize,
    inner: CoefficientFamily,
}

/// `k_i = k_{i+1} ⇒ ε_i = ε_{i+1}`.
pub fn in_reduced_set(k: &[usize], eps: &[bool]) -> bool {
    k.windows(2).zip(eps.windows(2)).all(|(kw, ew)| kw[0] != kw[1] || ew[0] == ew[1])
}

impl StarCoefficientFamily {
    pub fn new(d: usize, r: usize, alpha: usize) -> Result<Self> {
        Ok(StarCoefficientFamily {
            r,
            inner: CoefficientFamily::new(d, 2 * r, alpha)?,
        })
    }

    pub fn d(&self) -> usize {
        self.inner.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn alpha(&self) -> usize {
        self.inner.alpha
    }

    /// Inserts `a_{k,ε}` (`true` meaning `*`); tuples outside the reduced set are rejected.
    pub fn insert(&mut self, k: &[usize], eps: &[bool], a: CMat) -> Result<()> {
        check_tuple(k, self.d(), self.r)?;
        if eps.len() != k.len() {
            return Err(Error::IndexRange(format!("sign string length {} != {}", eps.len(), k.len())));
        }
        if !in_reduced_set(k, eps) {
            return Err(Error::Support(format!(
                "({k:?}, {}) has equal adjacent letters with different signs",
                eps_string(eps)
            )));
        }
        let codes = k.iter().zip(eps).map(|(&ki, &e)| star_code(ki, e)).collect();
        self.inner.insert(codes, a)
    }

    pub fn get(&self, k: &[usize], eps: &[bool]) -> Option<&CMat> {
        let codes: Vec<usize> = k.iter().zip(eps).map(|(&ki, &e)| star_code(ki, e)).collect();
        self.inner.get(&codes)
    }

    /// The family over the doubled alphabet `{1..2r}`; its `M_l` are the
    /// block matrices of the starred family.
    pub fn as_doubled(&self) -> &CoefficientFamily {
        &self.inner
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, Vec<bool>, &CMat)> {
        self.inner.entries().map(|(codes, a)| {
            let (k, e): (Vec<usize>, Vec<bool>) = codes.iter().map(|&c| star_decode(c)).unzip();
            (k, e, a)
        })
    }

    /// `ε` all plain: the holomorphic family seen as a starred one.
    pub fn embed(a: &CoefficientFamily) -> Self {
        let mut out = Self::new(a.d, a.r, a.alpha).unwrap();
        let plain = vec![false; a.d];
        for (k, m) in a.entries() {
            out.insert(k, &plain, m.clone()).unwrap();
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("family d={} r={} alpha={} star\n", self.d(), self.r, self.alpha());
        for (k, e, a) in self.entries() {
            s.push_str(&join_tuple(&k));
            s.push(' ');
            s.push_str(&eps_string(&e));
            write_matrix(&mut s, a);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        match parse_text(text)? {
            Parsed::Star(f) => Ok(f),
            Parsed::Plain(_) => Err(Error::Parse("expected a starred family".into())),
        }
    }
}

pub fn eps_string(eps: &[bool]) -> String {
    eps.iter().map(|&e| if e { '*' } else { '1' }).collect()
}

pub fn parse_eps(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '1' => Ok(false),
            '*' => Ok(true),
            _ => Err(Error::Parse(format!("bad sign character {c:?} in {s:?}"))),
        })
        .collect()
}

/// Either kind of family read from a file.
#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    Plain(CoefficientFamily),
    Star(StarCoefficientFamily),
}

pub fn parse_text(text: &str) -> Result<Parsed> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty family file".into()))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("family") {
        return Err(Error::Parse(format!("header must start with `family`: {header:?}")));
    }
    let (mut d, mut r, mut alpha, mut star) = (None, None, None, false);
    for w in words {
        if w == "star" {
            star = true;
            continue;
        }
        let (key, val) = w
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header field {w:?}")))?;
        let v: usize = val
            .parse()
            .map_err(|_| Error::Parse(format!("bad value in header field {w:?}")))?;
        match key {
            "d" => d = Some(v),
            "r" => r = Some(v),
            "alpha" => alpha = Some(v),
            _ => return Err(Error::Parse(format!("unknown header field {key:?}"))),
        }
    }
    let missing = |name: &str| Error::Parse(format!("header lacks {name}"));
    let (d, r, alpha) = (d.ok_or_else(|| missing("d"))?, r.ok_or_else(|| missing("r"))?, alpha.ok_or_else(|| missing("alpha"))?);
    let mut plain = CoefficientFamily::new(d, r, alpha)?;
    let mut starred = StarCoefficientFamily::new(d, r, alpha)?;
    for (lineno, line) in lines {
        let err = |msg: String| Error::Parse(format!("line {lineno}: {msg}"));
        let (index_part, values) = line
            .split_once(':')
            .ok_or_else(|| err("missing `:` separator".into()))?;
        let mut idx_words = index_part.split_whitespace();
        let tuple: Vec<usize> = idx_words
            .next()
            .ok_or_else(|| err("missing index tuple".into()))?
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| err(format!("bad index {t:?}"))))
            .collect::<Result<_>>()?;
        let eps = if star {
            Some(parse_eps(idx_words.next().ok_or_else(|| err("missing sign string".into()))?)?)
        } else {
            None
        };
        if idx_words.next().is_some() {
            return Err(err("unexpected text before `:`".into()));
        }
        let nums: Vec<Complex64> = values
            .split_whitespace()
            .map(|pair| {
                let (re, im) = pair.split_once(',').ok_or_else(|| err(format!("bad entry {pair:?}")))?;
                let re: f64 = re.parse().map_err(|_| err(format!("bad real part {re:?}")))?;
                let im: f64 = im.parse().map_err(|_| err(format!("bad imaginary part {im:?}")))?;
                Ok(Complex64::new(re, im))
            })
            .collect::<Result<_>>()?;
        if nums.len() != alpha * alpha {
            return Err(err(format!("expected {} entries, found {}", alpha * alpha, nums.len())));
        }
        let m = CMat::from_row_slice(alpha, alpha, &nums);
        match eps {
            Some(e) => starred.insert(&tuple, &e, m)?,
            None => plain.insert(tuple, m)?,
        }
    }
    Ok(if star { Parsed::Star(starred) } else { Parsed::Plain(plain) })
}

/// Which index tuples a random family may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    Full,
    /// `k_i ≠ k_{i+1}` throughout.
    NoAdjacentRepeat,
}

fn all_tuples(d: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=r).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

fn random_matrix<R: Rng>(rng: &mut R, alpha: usize) -> CMat {
    CMat::from_fn(alpha, alpha, |_, _| {
        let re = rng.random_range(-1.0..=1.0);
        let im = rng.random_range(-1.0..=1.0);
        Complex64::new(re, im)
    })
}

/// Entries with independent uniform real and imaginary parts in `[-1, 1]`.
pub fn random_family<R: Rng>(rng: &mut R, d: usize, r: usize, alpha: usize, support: Support) -> Result<CoefficientFamily> {
    let mut f = CoefficientFamily::new(d, r, alpha)?;
    for k in all_tuples(d, r) {
        if support == Support::NoAdjacentRepeat && k.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let m = random_matrix(rng, alpha);
        f.insert(k, m)?;
    }
    Ok(f)
}

/// Random starred family filling the whole reduced set.
pub fn random_star_family<R: Rng>(rng: &mut R, d: usize, r: usize, alpha: usize) -> Result<StarCoefficientFamily> {
    let mut f = StarCoefficientFamily::new(d, r, alpha)?;
    for k in all_tuples(d, r) {
        for bits in 0u32..(1 << d) {
            let eps: Vec<bool> = (0..d).map(|i| bits >> i & 1 == 1).collect();
            if in_reduced_set(&k, &eps) {
                let m = random_matrix(rng, alpha);
                f.insert(&k, &eps, m)?;
            }
        }
    }
    Ok(f)
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|i| i * i <= p).all(|i| !p.is_multiple_of(i))
}

/// `a_k = exp(2iπ k_1 ⋯ k_d / p)` for `k ∈ {1..p}^d`, scalar.
pub fn prime_family(p: u64, d: usize) -> Result<CoefficientFamily> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let r = p as usize;
    let mut f = CoefficientFamily::new(d, r, 1)?;
    for k in all_tuples(d, r) {
        let prod = k.iter().fold(1u64, |acc, &x| acc * x as u64 % p);
        let theta = 2.0 * std::f64::consts::PI * prod as f64 / p as f64;
        f.insert(k, CMat::from_element(1, 1, Complex64::from_polar(1.0, theta)))?;
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn flip_moves_entries() {
        let mut f = CoefficientFamily::new(2, 2, 1).unwrap();
        f.insert(vec![1, 2], CMat::from_element(1, 1, Complex64::new(3.0, 0.0))).unwrap();
        let g = f.flip();
        assert!(g.get(&[1, 2]).is_none());
        assert_eq!(g.get(&[2, 1]).unwrap()[(0, 0)].re, 3.0);
        assert_eq!(g.flip(), f);
        let mut one = CoefficientFamily::new(1, 3, 2).unwrap();
        one.insert(vec![2], CMat::identity(2, 2)).unwrap();
        assert_eq!(one.flip(), one);
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_family(&mut rng, 2, 2, 2, Support::Full).unwrap();
        let back = CoefficientFamily::from_text(&f.to_text()).unwrap();
        assert_eq!(back, f);
        let s = random_star_family(&mut rng, 2, 2, 1).unwrap();
        let back = StarCoefficientFamily::from_text(&s.to_text()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_text("").is_err());
        assert!(parse_text("family d=1 r=1").is_err());
        assert!(parse_text("family d=1 r=1 alpha=1\n2 : 1,0").is_err());
        assert!(parse_text("family d=1 r=1 alpha=1\n1 : 1,0 2,0").is_err());
        assert!(parse_text("family d=2 r=2 alpha=1 star\n1,1 1* : 1,0").is_err());
        let f = parse_text("# comment\nfamily d=2 r=2 alpha=1 star\n\n1,2 1* : 1,0\n").unwrap();
        match f {
            Parsed::Star(s) => assert!(s.get(&[1, 2], &[false, true]).is_some()),
            Parsed::Plain(_) => panic!("expected star family"),
        }
    }

    #[test]
    fn primes() {
        assert!(is_prime(2) && is_prime(3) && is_prime(5) && is_prime(7));
        assert!(!is_prime(1) && !is_prime(4) && !is_prime(9));
        assert_eq!(prime_family(4, 2), Err(Error::NotPrime(4)));
        let f = prime_family(3, 2).unwrap();
        assert_eq!(f.support_size(), 9);
        assert!((f.frobenius_sq() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn random_supports() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_family(&mut rng, 3, 2, 1, Support::NoAdjacentRepeat).unwrap();
        assert_eq!(f.support_size(), 2);
        assert!(!f.has_adjacent_repeat());
        let s = random_star_family(&mut rng, 2, 2, 1).unwrap();
        // 16 signed tuples minus the 4 with k1 = k2 and different signs
        assert_eq!(s.as_doubled().support_size(), 12);
    }

    #[test]
    fn star_codes() {
        for k in 1..=4 {
            for e in [false, true] {
                assert_eq!(star_decode(star_code(k, e)), (k, e));
            }
        }
    }
}
