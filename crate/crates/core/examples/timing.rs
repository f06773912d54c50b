use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use workbench_core::hermite::{hermite_form, PolyVec};
use workbench_core::scalar::{rat_from, FieldContext, GaussRat, Scalar};
use workbench_core::upoly::UPoly;

fn main() {
    let ctx = FieldContext::new(GaussRat::from_int(2)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut mk_vec = |mask: u32| {
        let mut v = PolyVec::zero(4);
        for g in 0..4 {
            if mask & (1 << g) == 0 { continue; }
            let mut coeffs = Vec::new();
            for _ in 0..=3 {
                let mut c = Scalar::from_rat(rat_from(rng.gen_range(-3..=3)));
                c = c.add(&Scalar::i_unit().mul(&Scalar::from_rat(rat_from(rng.gen_range(-3..=3))), &ctx));
                c = c.add(&Scalar::sqrt_p(&ctx).mul(&Scalar::from_rat(rat_from(rng.gen_range(-3..=3))), &ctx));
                coeffs.push(c);
            }
            v.0[g] = UPoly::from_coeffs(coeffs);
        }
        v
    };
    // Four dense rows, as a worst case.
    let rows: Vec<PolyVec> = (0..4).map(|_| mk_vec(15)).collect();
    let t = Instant::now();
    let b = hermite_form(&rows, 4, &ctx);
    println!("hnf of 4 dense rows: rank {} in {:.2?}", b.rank(), t.elapsed());
    let sizes: Vec<usize> = b.rows().iter().map(|r| format!("{r}").len()).collect();
    println!("row sizes {:?}", sizes);
}
