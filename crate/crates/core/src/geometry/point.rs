use std::fmt;

use crate::error::{check_dim, invalid, Result};

/// A point of `R^d` with finite coordinates.
#[derive(Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(invalid("points need dimension at least 1"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(invalid(format!("non-finite coordinate in {coords:?}")));
        }
        Ok(Self(coords))
    }

    pub fn origin(dim: usize) -> Self {
        Self(vec![0.0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, v: &[f64]) -> f64 {
        dot(&self.0, v)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn distance(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn sub(&self, other: &Point) -> Vec<f64> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    pub fn translate(&self, v: &[f64]) -> Point {
        Point(self.0.iter().zip(v).map(|(a, b)| a + b).collect())
    }

    /// `(1 - s) * self + s * other`.
    pub fn lerp(&self, other: &Point, s: f64) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| (1.0 - s) * a + s * b)
                .collect(),
        )
    }

    /// Lexicographic comparison of coordinates (total order on finite floats).
    pub fn lex_cmp(&self, other: &Point) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        self.0.len().cmp(&other.0.len())
    }

    /// Weighted sum `Σ w_i p_i`; all points must share a dimension.
    pub fn weighted_sum<'a>(items: impl IntoIterator<Item = (f64, &'a Point)>) -> Option<Point> {
        let mut acc: Option<Vec<f64>> = None;
        for (w, p) in items {
            let acc = acc.get_or_insert_with(|| vec![0.0; p.dim()]);
            for (a, c) in acc.iter_mut().zip(&p.0) {
                *a += w * c;
            }
        }
        acc.map(Point)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{:?}", self.0)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = crate::Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(v: [f64; N]) -> Self {
        Point::new(v.to_vec()).expect("finite coordinates of positive dimension")
    }
}

/// A unit vector standing for a norm-one linear functional `x ↦ <f, x>`.
#[derive(Clone, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Normalises `coords`; rejects zero and non-finite vectors.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.iter().any(|c| !c.is_finite()) {
            return Err(invalid(format!("bad direction {coords:?}")));
        }
        let n = norm(&coords);
        if n == 0.0 {
            return Err(invalid("zero vector has no direction"));
        }
        Ok(Self(coords.into_iter().map(|c| c / n).collect()))
    }

    pub fn axis(dim: usize, k: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[k] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// `<f, x>`.
    pub fn apply(&self, x: &Point) -> Result<f64> {
        check_dim(self.dim(), x.dim())?;
        Ok(dot(&self.0, x.coords()))
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Direction{:?}", self.0)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
