//! Seeded random phase-space samples.
//!
//! Every sample index gets its own ChaCha stream, so batch evaluation yields
//! identical points whether it runs sequentially or on the rayon pool.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PhasePoint, PoissonStructure, Vec3};

/// Components are drawn uniformly from [-HALF_WIDTH, HALF_WIDTH].
pub const HALF_WIDTH: f64 = 2.0;

/// Generator for the `index`-th sample of a run seeded with `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn uniform3<R: Rng>(rng: &mut R) -> Vec3 {
    Vec3::new(
        rng.gen_range(-HALF_WIDTH..HALF_WIDTH),
        rng.gen_range(-HALF_WIDTH..HALF_WIDTH),
        rng.gen_range(-HALF_WIDTH..HALF_WIDTH),
    )
}

/// Uniform point of the box [-2, 2]^6.
pub fn uniform_point<R: Rng>(rng: &mut R) -> PhasePoint {
    PhasePoint::new(uniform3(rng), uniform3(rng))
}

/// Uniform point of the box restricted to (q, Jq) > `min_c1`, by rejection.
pub fn uniform_point_with_c1_above<R: Rng>(
    rng: &mut R,
    structure: PoissonStructure,
    min_c1: f64,
) -> PhasePoint {
    loop {
        let x = uniform_point(rng);
        let (c1, _) = super::casimirs(&x, structure);
        if c1 > min_c1 {
            return x;
        }
    }
}

/// Point on the symplectic leaf C1 = `c1`, C2 = `c2`.
///
/// q is placed on the leaf's quadric (sphere, upper hyperboloid sheet for
/// Lorentzian c1 > 0, one-sheeted hyperboloid for c1 < 0), then M drawn from
/// the box is shifted along q to hit C2.
pub fn leaf_point<R: Rng>(rng: &mut R, structure: PoissonStructure, c1: f64, c2: f64) -> PhasePoint {
    let q = match structure {
        PoissonStructure::Euclidean => {
            let v = loop {
                let v = uniform3(rng);
                if v.norm() > 1e-3 {
                    break v;
                }
            };
            v.normalized() * c1.sqrt()
        }
        PoissonStructure::Lorentzian if c1 > 0.0 => {
            let q1 = rng.gen_range(-HALF_WIDTH..HALF_WIDTH);
            let q2 = rng.gen_range(-HALF_WIDTH..HALF_WIDTH);
            Vec3::new(q1, q2, (c1 + q1 * q1 + q2 * q2).sqrt())
        }
        PoissonStructure::Lorentzian => {
            let q3 = rng.gen_range(-HALF_WIDTH..HALF_WIDTH);
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            let radius = (q3 * q3 - c1).sqrt();
            Vec3::new(radius * angle.cos(), radius * angle.sin(), q3)
        }
    };
    let m = uniform3(rng);
    shift_to_c2(PhasePoint::new(m, q), structure, c2)
}

/// Moves M along q so that C2 takes the value `c2`; C1 is untouched.
pub(crate) fn shift_to_c2(x: PhasePoint, structure: PoissonStructure, c2: f64) -> PhasePoint {
    let (c1, current) = super::casimirs(&x, structure);
    let lambda = (c2 - current) / c1;
    PhasePoint::new(x.m + x.q * lambda, x.q)
}
