//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::TAU;

use num_bigint::BigInt;
use ortho3::qfield::tower_sqrt;
use ortho3::qfield::Rational;
use ortho3::TowerField;
use ortho3::{AngleRep, Mat3, TowerElem, UnitAxis, Vec3};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on the sphere by rejection from the cube.
pub fn sphere_point(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let p: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        if n2 > 1e-4 && n2 <= 1.0 {
            let n = n2.sqrt();
            return [p[0] / n, p[1] / n, p[2] / n];
        }
    }
}

pub fn float_axis(rng: &mut impl Rng) -> UnitAxis<f64> {
    let [x, y, z] = sphere_point(rng);
    UnitAxis::normalize(Vec3::new(x, y, z), 1e-9).unwrap()
}

pub fn float_angle(rng: &mut impl Rng) -> (f64, AngleRep<f64>) {
    let alpha = rng.gen_range(0.0..TAU);
    (alpha, AngleRep::from_radians(alpha))
}

pub fn rational(n: i64, d: i64) -> TowerElem {
    TowerElem::from_ratio(n, d)
}

pub fn random_rational(rng: &mut impl Rng, bound: i64) -> TowerElem {
    rational(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

/// Rational unit vector `(m²+n²−p²−q², 2(mq+np), 2(nq−mp)) / (m²+n²+p²+q²)`.
pub fn rational_axis(rng: &mut impl Rng) -> UnitAxis<TowerElem> {
    loop {
        let [m, n, p, q]: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-7..=7));
        let d = m * m + n * n + p * p + q * q;
        if d == 0 {
            continue;
        }
        let v = Vec3::new(
            rational(m * m + n * n - p * p - q * q, d),
            rational(2 * (m * q + n * p), d),
            rational(2 * (n * q - m * p), d),
        );
        return UnitAxis::new(v, 0.0).expect("quadruple parametrization is unit");
    }
}

/// Rational point on the unit circle from the slope `t`.
pub fn rational_angle(rng: &mut impl Rng) -> AngleRep<TowerElem> {
    let (k, l) = (rng.gen_range(-9i64..=9), rng.gen_range(1i64..=9));
    let den = k * k + l * l;
    AngleRep::new(rational(l * l - k * k, den), rational(2 * k * l, den), 0.0).unwrap()
}

/// Rotation from the unit quaternion `(cos α/2, sin α/2 · u)`.
pub fn quaternion_matrix(u: [f64; 3], alpha: f64) -> [[f64; 3]; 3] {
    let (s, w) = (alpha / 2.0).sin_cos();
    let (x, y, z) = (s * u[0], s * u[1], s * u[2]);
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

/// Reflection acting column by column: `e_j − 2⟨u, e_j⟩u`.
pub fn mirror_matrix(u: [f64; 3]) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { 1.0 } else { 0.0 } - 2.0 * u[i] * u[j])
    })
}

pub fn mat_from(rows: [[f64; 3]; 3]) -> Mat3<f64> {
    Mat3::from_rows(rows)
}

pub fn max_diff(a: &Mat3<f64>, b: &Mat3<f64>) -> f64 {
    a.entries()
        .zip(b.entries())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(big(n), big(d))
}

/// `Q(√d₁)(√d₂)(√(k + √d₁))` for distinct primes and a random `k`.
pub fn depth3_tower(rng: &mut impl Rng) -> TowerField {
    let mut primes = vec![2, 3, 5, 7, 11, 13];
    primes.shuffle(rng);
    let q = TowerField::rationals();
    let (f1, r1) = tower_sqrt(&q, &TowerElem::from_int(primes[0])).unwrap();
    let (f2, _) = tower_sqrt(&f1, &TowerElem::from_int(primes[1])).unwrap();
    let k = TowerElem::from_int(rng.gen_range(4..20));
    let (f3, _) = tower_sqrt(&f2, &(k + r1.lift(&f2).unwrap())).unwrap();
    assert_eq!(f3.depth(), 3);
    f3
}

pub fn random_elem(rng: &mut impl Rng, field: &TowerField, bound: i64) -> TowerElem {
    let coeffs: Vec<Rational> = (0..field.degree())
        .map(|_| {
            if rng.gen_bool(0.25) {
                q(0, 1)
            } else {
                q(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
            }
        })
        .collect();
    TowerElem::from_coefficients(field, coeffs)
}
