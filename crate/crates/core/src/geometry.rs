//! Triangle kernel: construction, the fifteen elements, congruence.
//!
//! Two representations are used. [`Triangle`] stores the three sides and is
//! what solutions are reported as. [`AngleTriangle`] stores the angles plus a
//! scale and evaluates elements without ever forming the sides' differences,
//! which keeps nearly collinear family members accurate.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default distance from 0 and pi below which a parameter angle is rejected.
pub const DEFAULT_ANGLE_EPS: f64 = 1e-12;

/// Relative slack below which a side triple counts as collinear.
const DEGENERACY_SLACK: f64 = 4.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ElementKind {
    #[serde(rename = "a")]
    SideA,
    #[serde(rename = "b")]
    SideB,
    #[serde(rename = "c")]
    SideC,
    #[serde(rename = "alpha")]
    AngleA,
    #[serde(rename = "beta")]
    AngleB,
    #[serde(rename = "gamma")]
    AngleC,
    #[serde(rename = "h_a")]
    HeightA,
    #[serde(rename = "h_b")]
    HeightB,
    #[serde(rename = "h_c")]
    HeightC,
    #[serde(rename = "m_a")]
    MedianA,
    #[serde(rename = "m_b")]
    MedianB,
    #[serde(rename = "m_c")]
    MedianC,
    #[serde(rename = "l_a")]
    BisectorA,
    #[serde(rename = "l_b")]
    BisectorB,
    #[serde(rename = "l_c")]
    BisectorC,
}

impl ElementKind {
    pub const ALL: [ElementKind; 15] = [
        ElementKind::SideA,
        ElementKind::SideB,
        ElementKind::SideC,
        ElementKind::AngleA,
        ElementKind::AngleB,
        ElementKind::AngleC,
        ElementKind::HeightA,
        ElementKind::HeightB,
        ElementKind::HeightC,
        ElementKind::MedianA,
        ElementKind::MedianB,
        ElementKind::MedianC,
        ElementKind::BisectorA,
        ElementKind::BisectorB,
        ElementKind::BisectorC,
    ];

    pub fn is_angle(self) -> bool {
        matches!(
            self,
            ElementKind::AngleA | ElementKind::AngleB | ElementKind::AngleC
        )
    }

    pub fn is_length(self) -> bool {
        !self.is_angle()
    }

    /// The same element at the mirrored vertex when A and B trade labels.
    pub fn swap_ab(self) -> Self {
        use ElementKind::*;
        match self {
            SideA => SideB,
            SideB => SideA,
            AngleA => AngleB,
            AngleB => AngleA,
            HeightA => HeightB,
            HeightB => HeightA,
            MedianA => MedianB,
            MedianB => MedianA,
            BisectorA => BisectorB,
            BisectorB => BisectorA,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        use ElementKind::*;
        match self {
            SideA => "a",
            SideB => "b",
            SideC => "c",
            AngleA => "alpha",
            AngleB => "beta",
            AngleC => "gamma",
            HeightA => "h_a",
            HeightB => "h_b",
            HeightC => "h_c",
            MedianA => "m_a",
            MedianB => "m_b",
            MedianC => "m_c",
            BisectorA => "l_a",
            BisectorB => "l_b",
            BisectorC => "l_c",
        }
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ElementKind {
    type Err = Error;

    /// Accepts `h_a`, `ha`, `alpha`, `A`, `angle_a` and similar spellings.
    fn from_str(s: &str) -> Result<Self> {
        use ElementKind::*;
        let key: String = s
            .trim()
            .chars()
            .filter(|c| *c != '_' && *c != '-')
            .collect::<String>()
            .to_ascii_lowercase();
        let kind = match key.as_str() {
            "a" | "sidea" | "bc" => SideA,
            "b" | "sideb" | "ca" | "ac" => SideB,
            "c" | "sidec" | "ab" => SideC,
            "alpha" | "anglea" => AngleA,
            "beta" | "angleb" => AngleB,
            "gamma" | "anglec" => AngleC,
            "ha" | "heighta" => HeightA,
            "hb" | "heightb" => HeightB,
            "hc" | "heightc" => HeightC,
            "ma" | "mediana" => MedianA,
            "mb" | "medianb" => MedianB,
            "mc" | "medianc" => MedianC,
            "la" | "bisectora" => BisectorA,
            "lb" | "bisectorb" => BisectorB,
            "lc" | "bisectorc" => BisectorC,
            _ => return Err(Error::InvalidInput(format!("unknown element `{s}`"))),
        };
        Ok(kind)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-9,
            abs: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn validate(&self) -> Result<()> {
        if self.rel > 0.0 && self.abs > 0.0 && self.rel.is_finite() && self.abs.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "tolerances must be positive, got rel={} abs={}",
                self.rel, self.abs
            )))
        }
    }
}

/// A triangle given by its sides; `a` is opposite vertex A and so on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    a: f64,
    b: f64,
    c: f64,
}

impl Triangle {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        for (name, value) in [('a', a), ('b', b), ('c', c)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveSide { name, value });
            }
        }
        let perimeter = a + b + c;
        for (failed, slack) in [
            ("a < b + c", (b + c) - a),
            ("b < a + c", (a + c) - b),
            ("c < a + b", (a + b) - c),
        ] {
            if slack <= DEGENERACY_SLACK * perimeter {
                return Err(Error::TriangleInequalityViolated { failed, slack });
            }
        }
        Ok(Triangle { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn sides(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn perimeter(&self) -> f64 {
        self.a + self.b + self.c
    }

    pub fn alpha(&self) -> f64 {
        kahan_angle(self.a, self.b, self.c)
    }

    pub fn beta(&self) -> f64 {
        kahan_angle(self.b, self.c, self.a)
    }

    pub fn gamma(&self) -> f64 {
        kahan_angle(self.c, self.a, self.b)
    }

    pub fn angles(&self) -> [f64; 3] {
        [self.alpha(), self.beta(), self.gamma()]
    }

    pub fn area(&self) -> f64 {
        let mut s = [self.a, self.b, self.c];
        s.sort_by(|x, y| y.total_cmp(x));
        let [a, b, c] = s;
        let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
        0.25 * p.max(0.0).sqrt()
    }

    pub fn element(&self, kind: ElementKind) -> f64 {
        use ElementKind::*;
        let (a, b, c) = (self.a, self.b, self.c);
        match kind {
            SideA => a,
            SideB => b,
            SideC => c,
            AngleA => self.alpha(),
            AngleB => self.beta(),
            AngleC => self.gamma(),
            HeightA => 2.0 * self.area() / a,
            HeightB => 2.0 * self.area() / b,
            HeightC => 2.0 * self.area() / c,
            MedianA => median(a, b, c),
            MedianB => median(b, c, a),
            MedianC => median(c, a, b),
            BisectorA => bisector(a, b, c),
            BisectorB => bisector(b, c, a),
            BisectorC => bisector(c, a, b),
        }
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        Triangle::new(k * self.a, k * self.b, k * self.c)
    }

    /// Relabels A and B (and with them a and b).
    pub fn swap_ab(&self) -> Self {
        Triangle {
            a: self.b,
            b: self.a,
            c: self.c,
        }
    }
}

/// Angle opposite `x`, in a form that stays accurate for needle-like triangles.
fn kahan_angle(x: f64, y: f64, z: f64) -> f64 {
    let (p, q) = if y >= z { (y, z) } else { (z, y) };
    let mu = if q >= x { x - (p - q) } else { q - (p - x) };
    let num = ((p - q) + x) * mu;
    let den = (p + (q + x)) * ((p - x) + q);
    2.0 * (num.max(0.0) / den).sqrt().atan()
}

fn median(x: f64, y: f64, z: f64) -> f64 {
    0.5 * (2.0 * y * y + 2.0 * z * z - x * x).max(0.0).sqrt()
}

fn bisector(x: f64, y: f64, z: f64) -> f64 {
    let s = y + z;
    (y * z * (s - x) * (s + x)).max(0.0).sqrt() / s
}

/// Sorted side triples agree within `tol.rel` of the perimeter plus `tol.abs`.
pub fn congruent(t1: &Triangle, t2: &Triangle, tol: &Tolerance) -> bool {
    let mut s1 = t1.sides();
    let mut s2 = t2.sides();
    s1.sort_by(f64::total_cmp);
    s2.sort_by(f64::total_cmp);
    let radius = tol.rel * t1.perimeter().max(t2.perimeter()) + tol.abs;
    s1.iter().zip(&s2).all(|(x, y)| (x - y).abs() <= radius)
}

/// A triangle known through its angles and the diameter of its circumcircle.
///
/// The trigonometric values of the largest angle are derived from the sum of
/// the other two, so an angle close to pi costs no accuracy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleTriangle {
    angles: [f64; 3],
    sin: [f64; 3],
    cos_half: [f64; 3],
    scale: f64,
}

impl AngleTriangle {
    /// Angles must be positive and sum to pi up to rounding. Scale starts at 1.
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let mut angles = [alpha, beta, gamma];
        if angles.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::DegenerateParameter(format!(
                "angles ({alpha}, {beta}, {gamma}) must be positive"
            )));
        }
        let sum = alpha + beta + gamma;
        if (sum - PI).abs() > 1e-9 {
            return Err(Error::DegenerateParameter(format!(
                "angles sum to {sum}, not pi"
            )));
        }
        let big = (0..3)
            .max_by(|&i, &j| angles[i].total_cmp(&angles[j]))
            .unwrap_or(0);
        let mut sin = [0.0; 3];
        let mut cos_half = [0.0; 3];
        for i in 0..3 {
            if i != big {
                sin[i] = angles[i].sin();
                cos_half[i] = (0.5 * angles[i]).cos();
            }
        }
        let rest = (0..3).filter(|&i| i != big).map(|i| angles[i]).sum::<f64>();
        sin[big] = rest.sin();
        cos_half[big] = (0.5 * rest).sin();
        angles[big] = PI - rest;
        Ok(AngleTriangle {
            angles,
            sin,
            cos_half,
            scale: 1.0,
        })
    }

    /// Rescales so that `kind` takes `value`.
    pub fn with_scale(mut self, kind: ElementKind, value: f64) -> Result<Self> {
        if kind.is_angle() {
            return Err(Error::InvalidScaleKind(kind));
        }
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidInput(format!(
                "scale value {value} must be a positive length"
            )));
        }
        self.scale = 1.0;
        let unit = self.element(kind);
        self.scale = value / unit;
        Ok(self)
    }

    pub fn scaled(mut self, k: f64) -> Self {
        self.scale *= k;
        self
    }

    pub fn angles(&self) -> [f64; 3] {
        self.angles
    }

    pub fn sides(&self) -> [f64; 3] {
        self.sin.map(|s| self.scale * s)
    }

    pub fn element(&self, kind: ElementKind) -> f64 {
        use ElementKind::*;
        let [a, b, c] = self.sides();
        let [sa, sb, sc] = self.sin;
        let [ha, hb, hc] = self.cos_half;
        let k = self.scale;
        match kind {
            SideA => a,
            SideB => b,
            SideC => c,
            AngleA => self.angles[0],
            AngleB => self.angles[1],
            AngleC => self.angles[2],
            HeightA => k * sb * sc,
            HeightB => k * sa * sc,
            HeightC => k * sa * sb,
            MedianA => half_chord(b, c, ha),
            MedianB => half_chord(a, c, hb),
            MedianC => half_chord(a, b, hc),
            BisectorA => 2.0 * b * c * ha / (b + c),
            BisectorB => 2.0 * a * c * hb / (a + c),
            BisectorC => 2.0 * a * b * hc / (a + b),
        }
    }

    pub fn to_triangle(&self) -> Result<Triangle> {
        let [a, b, c] = self.sides();
        Triangle::new(a, b, c)
    }
}

/// Median from the vertex between sides `y` and `z`, whose half-angle cosine is `ch`.
fn half_chord(y: f64, z: f64, ch: f64) -> f64 {
    let d = y - z;
    0.5 * (d * d + 4.0 * y * z * ch * ch).sqrt()
}

pub fn make_triangle(a: f64, b: f64, c: f64) -> Result<Triangle> {
    Triangle::new(a, b, c)
}

pub fn element(t: &Triangle, kind: ElementKind) -> f64 {
    t.element(kind)
}

pub fn triangle_from_heights_gamma(h_a: f64, h_b: f64, gamma: f64) -> Result<Triangle> {
    triangle_from_heights_gamma_eps(h_a, h_b, gamma, DEFAULT_ANGLE_EPS)
}

pub fn triangle_from_heights_gamma_eps(h_a: f64, h_b: f64, gamma: f64, eps: f64) -> Result<Triangle> {
    for (name, h) in [("h_a", h_a), ("h_b", h_b)] {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidInput(format!("{name} = {h} must be positive")));
        }
    }
    if !(gamma > eps && gamma < PI - eps) {
        return Err(Error::DegenerateParameter(format!(
            "gamma = {gamma} is within {eps:e} of 0 or pi"
        )));
    }
    let s = gamma.sin();
    let a = h_b / s;
    let b = h_a / s;
    let half = (0.5 * gamma).sin();
    let c = ((a - b) * (a - b) + 4.0 * a * b * half * half).sqrt();
    Triangle::new(a, b, c)
}

pub fn triangle_from_angles(
    alpha: f64,
    beta: f64,
    scale_kind: ElementKind,
    scale_value: f64,
) -> Result<Triangle> {
    if scale_kind.is_angle() {
        return Err(Error::InvalidScaleKind(scale_kind));
    }
    if !(alpha > 0.0 && beta > 0.0 && alpha + beta < PI) {
        return Err(Error::DegenerateParameter(format!(
            "angles ({alpha}, {beta}) do not leave room for a third"
        )));
    }
    AngleTriangle::new(alpha, beta, PI - alpha - beta)?
        .with_scale(scale_kind, scale_value)?
        .to_triangle()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: f64, y: f64, rel: f64) -> bool {
        (x - y).abs() <= rel * x.abs().max(y.abs())
    }

    #[test]
    fn equilateral_angles() {
        let t = make_triangle(1.0, 1.0, 1.0).unwrap();
        for a in t.angles() {
            assert!(close(a, PI / 3.0, 1e-15));
        }
    }

    #[test]
    fn collinear_rejected() {
        assert!(matches!(
            make_triangle(1.0, 1.0, 2.0),
            Err(Error::TriangleInequalityViolated { failed: "c < a + b", .. })
        ));
        assert!(matches!(
            make_triangle(0.0, 1.0, 1.0),
            Err(Error::NonPositiveSide { name: 'a', .. })
        ));
        assert!(make_triangle(f64::NAN, 1.0, 1.0).is_err());
    }

    #[test]
    fn right_angle_from_345() {
        let t = make_triangle(3.0, 4.0, 5.0).unwrap();
        assert!(close(t.gamma(), PI / 2.0, 1e-15));
        assert!(close(t.area(), 6.0, 1e-15));
    }

    #[test]
    fn equilateral_bisector() {
        let t = make_triangle(2.0, 2.0, 2.0).unwrap();
        assert!(close(element(&t, ElementKind::BisectorA), 3f64.sqrt(), 1e-15));
    }

    #[test]
    fn median_by_coordinates() {
        // C=(0,0), B=(1,0), A=(0,1): midpoint of BC is (1/2, 0).
        let t = make_triangle(1.0, 1.0, 2f64.sqrt()).unwrap();
        let coord = (0.25f64 + 1.0).sqrt();
        assert!(close(t.element(ElementKind::MedianA), coord, 1e-15));
        assert!(close(coord, 1.118_033_988_749_895, 1e-15));
    }

    #[test]
    fn heights_gamma_examples() {
        let t = triangle_from_heights_gamma(1.0, 1.0, PI / 3.0).unwrap();
        for s in t.sides() {
            assert!(close(s, 2.0 / 3f64.sqrt(), 1e-15));
        }
        let t = triangle_from_heights_gamma(1.0, 1.0, PI / 2.0).unwrap();
        assert!(close(t.a(), 1.0, 1e-15) && close(t.b(), 1.0, 1e-15));
        assert!(close(t.c(), 2f64.sqrt(), 1e-15));
        let t = triangle_from_heights_gamma(0.8, 1.0, 1.0).unwrap();
        assert!(close(t.element(ElementKind::HeightA), 0.8, 1e-12));
        assert!(close(t.element(ElementKind::HeightB), 1.0, 1e-12));
        assert!(close(t.gamma(), 1.0, 1e-12));
        assert!(matches!(
            triangle_from_heights_gamma(1.0, 1.0, 1e-13),
            Err(Error::DegenerateParameter(_))
        ));
        assert!(matches!(
            triangle_from_heights_gamma(1.0, 1.0, PI),
            Err(Error::DegenerateParameter(_))
        ));
    }

    #[test]
    fn angles_examples() {
        let t = triangle_from_angles(PI / 3.0, PI / 3.0, ElementKind::SideC, 1.0).unwrap();
        for s in t.sides() {
            assert!(close(s, 1.0, 1e-15));
        }
        let t = triangle_from_angles(PI / 2.0, PI / 4.0, ElementKind::SideA, 1.0).unwrap();
        assert!(close(t.a(), 1.0, 1e-15));
        assert!(close(t.b(), t.c(), 1e-15));
        assert!(close(t.alpha(), PI / 2.0, 1e-12));
        assert!(close(t.beta(), PI / 4.0, 1e-12));
        let t = triangle_from_angles(PI / 3.0, PI / 3.0, ElementKind::BisectorA, 1.0).unwrap();
        assert!(close(t.a(), 2.0 / 3f64.sqrt(), 1e-15));
        assert!(matches!(
            triangle_from_angles(1.0, 1.0, ElementKind::AngleA, 1.0),
            Err(Error::InvalidScaleKind(ElementKind::AngleA))
        ));
        assert!(matches!(
            triangle_from_angles(2.0, 1.5, ElementKind::SideA, 1.0),
            Err(Error::DegenerateParameter(_))
        ));
    }

    #[test]
    fn congruence_examples() {
        let tol = Tolerance::default();
        let t1 = make_triangle(3.0, 4.0, 5.0).unwrap();
        let t2 = make_triangle(4.0, 5.0, 3.0).unwrap();
        let t3 = make_triangle(3.0, 4.0, 5.001).unwrap();
        assert!(congruent(&t1, &t2, &tol));
        assert!(!congruent(&t1, &t3, &tol));
    }

    #[test]
    fn angle_form_matches_side_form() {
        let shape = AngleTriangle::new(0.7, 1.1, PI - 1.8)
            .unwrap()
            .with_scale(ElementKind::SideC, 1.3)
            .unwrap();
        let t = shape.to_triangle().unwrap();
        for kind in ElementKind::ALL {
            assert!(
                close(shape.element(kind), t.element(kind), 1e-13),
                "{kind}: {} vs {}",
                shape.element(kind),
                t.element(kind)
            );
        }
    }

    #[test]
    fn needle_angles_stay_accurate() {
        // alpha = pi - 2e-9, beta = gamma = 1e-9
        let shape = AngleTriangle::new(PI - 2e-9, 1e-9, 1e-9).unwrap();
        let [a, b, c] = shape.sides();
        assert!(close(a, (2e-9f64).sin(), 1e-15));
        assert!(close(b, c, 1e-15));
        assert!(close(shape.element(ElementKind::HeightA), (1e-9f64).sin().powi(2), 1e-15));
    }

    #[test]
    fn element_names_round_trip() {
        for kind in ElementKind::ALL {
            assert_eq!(kind.name().parse::<ElementKind>().unwrap(), kind);
            assert_eq!(kind.swap_ab().swap_ab(), kind);
        }
        assert_eq!("lc".parse::<ElementKind>().unwrap(), ElementKind::BisectorC);
        assert_eq!("A".parse::<ElementKind>().unwrap(), ElementKind::SideA);
        assert!("q".parse::<ElementKind>().is_err());
    }
}
