//! Invariants over randomly presented cyclic modules `Σ^g A / (relations)`.

use proptest::prelude::*;

use destab::complexes::build_d_complex;
use destab::module::{is_module_map, RealizedModule};
use destab::oracle::derived_destab_oracle;
use destab::presentation::{realize, ModulePresentation, Relation};
use destab::singer::SingerModule;
use destab::steenrod::{basis_of_degree, SteenrodElement};
use destab::unstable::destabilize;

const HI: i32 = 10;

/// A cyclic module on a class of degree `g` killed by the chosen sums of
/// admissible monomials.
fn cyclic(g: i32, rels: &[(u32, u32)]) -> RealizedModule {
    let mut p = ModulePresentation::free(format!("C{g}"), vec![("x".into(), g)]);
    for (line, &(deg, mask)) in rels.iter().enumerate() {
        let basis = basis_of_degree(deg).unwrap();
        let mut theta = SteenrodElement::zero();
        for (i, m) in basis.iter().enumerate() {
            if mask >> (i % 32) & 1 == 1 {
                theta.add_assign(&SteenrodElement::from_monomial(m.clone()));
            }
        }
        if !theta.is_zero() {
            p.relations.push(Relation { terms: vec![(theta, 0)], degree: g + deg as i32, line: line + 1 });
        }
    }
    realize(&p, g, HI).unwrap()
}

fn module() -> impl Strategy<Value = RealizedModule> {
    (-2i32..=2, proptest::collection::vec((1u32..=6, 1u32..16), 1..4)).prop_map(|(g, rels)| cyclic(g, &rels))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn singer_complex_computes_derived_destabilization(m in module()) {
        let d = build_d_complex(&m, 2, HI).unwrap();
        prop_assert!(d.complex.d_squared_zero());
        let (dm, _) = destabilize(&m);
        let o = derived_destab_oracle(&m, 2, HI).unwrap();
        for s in 0..=2 {
            let v = d.complex.valid_hi(s).min(o.valid_hi[s]);
            for n in d.complex.lo()..=v {
                prop_assert_eq!(d.complex.homology_dim(s, n), o.dim(s, n), "s = {} degree {}", s, n);
                if s == 0 {
                    prop_assert_eq!(d.complex.homology_dim(0, n), dm.dim(n));
                }
            }
        }
    }

    #[test]
    fn residue_is_a_linear(m in module(), s in 1usize..=2) {
        let src = SingerModule::rs(&m, s, HI).unwrap();
        let tgt = SingerModule::rs(&destab::module::suspend(&m, -1), s - 1, HI - 1).unwrap();
        let d = src.differential(&tgt).unwrap();
        prop_assert!(is_module_map(src.module(), tgt.module(), &d));
    }

    #[test]
    fn connectivity_of_derived_functors(m in module()) {
        let d = build_d_complex(&m, 2, HI).unwrap();
        let c = m.connectivity().lower_bound();
        for s in 0..=2usize {
            let bound = (c + s as i64) << s;
            for n in d.complex.lo() as i64..=bound.min(d.complex.valid_hi(s) as i64) {
                prop_assert_eq!(d.complex.homology_dim(s, n as i32), 0);
            }
        }
    }
}
