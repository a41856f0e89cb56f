use proptest::prelude::*;

use planeaut::fields::{residue, valuation, DvrContext, Elem, Field, Scalar, Valuation};
use planeaut::random::{self, TestRng};

fn poly_in_x(field: &Field, rng: &mut TestRng, deg: usize) -> Elem {
    let x = field.x();
    let mut acc = Elem::zero(field);
    let mut xp = Elem::one(field);
    for _ in 0..=deg {
        acc = acc.add(&random::constant(field, rng, 5).mul(&xp));
        xp = xp.mul(&x);
    }
    acc
}

fn ratfunc(field: &Field, rng: &mut TestRng) -> Elem {
    let num = poly_in_x(field, rng, 2);
    let mut den = poly_in_x(field, rng, 2);
    if den.is_zero() {
        den = Elem::one(field);
    }
    num.div(&den).unwrap()
}

fn fields() -> impl Strategy<Value = Field> {
    prop_oneof![
        Just(Field::rationals()),
        Just(Field::cyclotomic(3)),
        Just(Field::cyclotomic(8)),
        Just(Field::rational_functions(1, "x")),
        Just(Field::rational_functions(6, "x")),
    ]
}

fn element(field: &Field, rng: &mut TestRng) -> Elem {
    if field.is_function_field() {
        ratfunc(field, rng)
    } else {
        random::constant(field, rng, 9).add(&field.zeta().mul(&random::constant(field, rng, 9)))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(field in fields(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (a, b, c) = (element(&field, &mut rng), element(&field, &mut rng), element(&field, &mut rng));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), Elem::one(&field));
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn valuation_is_discrete(seed in any::<u64>(), center in -2i64..=2) {
        let field = Field::rational_functions(3, "x");
        let ctx = DvrContext::new(field.rf_ctx().unwrap().clone(), field.base_field().int(center).as_cyclo().unwrap());
        let mut rng = random::rng(seed);
        let t = field.x().sub(&field.int(center));
        let a = ratfunc(&field, &mut rng).mul(&t.powi(rng_shift(&mut rng)).unwrap());
        let b = ratfunc(&field, &mut rng);
        let (va, vb) = (valuation(&a, &ctx).unwrap(), valuation(&b, &ctx).unwrap());
        prop_assert_eq!(valuation(&a.mul(&b), &ctx).unwrap(), va.add(vb));
        let vs = valuation(&a.add(&b), &ctx).unwrap();
        prop_assert!(vs >= va.min(vb));
        if va != vb {
            prop_assert_eq!(vs, va.min(vb));
        }
        prop_assert_eq!(valuation(&Elem::zero(&field), &ctx).unwrap(), Valuation::Infinity);
    }

    #[test]
    fn residue_is_multiplicative(seed in any::<u64>()) {
        let field = Field::rational_functions(1, "x");
        let ctx = DvrContext::new(field.rf_ctx().unwrap().clone(), field.base_field().int(1).as_cyclo().unwrap());
        let mut rng = random::rng(seed);
        let a = ratfunc(&field, &mut rng);
        let b = ratfunc(&field, &mut rng);
        prop_assume!(valuation(&a, &ctx).unwrap() >= Valuation::Finite(0));
        prop_assume!(valuation(&b, &ctx).unwrap() >= Valuation::Finite(0));
        let lhs = residue(&a.mul(&b), &ctx).unwrap();
        let rhs = residue(&a, &ctx).unwrap().mul(&residue(&b, &ctx).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

fn rng_shift(rng: &mut TestRng) -> i64 {
    use rand::Rng;
    rng.gen_range(-3..=3)
}
