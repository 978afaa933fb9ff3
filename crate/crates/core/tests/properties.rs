use proptest::prelude::*;
use windbraid::garside::{equals, inf_sup, left_normal_form};
use windbraid::labels::extreme_labels;
use windbraid::relax::geodesic_factorization;
use windbraid::sigma::{is_sigma_definite, sigma_definite_word};
use windbraid::{BraidWord, CurveDiagram, Letter, Scope};

fn word(max_strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (3..=max_strands).prop_flat_map(move |n| {
        prop::collection::vec((1..n, any::<bool>()), 0..=max_len).prop_map(move |ls| {
            let letters = ls.into_iter().map(|(i, p)| if p { Letter::pos(i) } else { Letter::neg(i) }).collect();
            BraidWord::new(n, letters).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn word_times_inverse_is_trivial(w in word(6, 14)) {
        prop_assert!(CurveDiagram::from_word(&w.concat(&w.inverse())).is_trivial());
    }

    #[test]
    fn labels_match_garside_bounds(w in word(6, 14)) {
        let (inf, sup, _) = inf_sup(&w);
        prop_assert_eq!(extreme_labels(&CurveDiagram::from_word(&w), Scope::Restricted), (sup, inf));
    }

    #[test]
    fn mirror_negates_labels(w in word(5, 12)) {
        let (ll, sl) = extreme_labels(&CurveDiagram::from_word(&w), Scope::Restricted);
        prop_assert_eq!(extreme_labels(&CurveDiagram::from_word(&w.mirror()), Scope::Restricted), (-sl, -ll));
    }

    #[test]
    fn normal_form_represents_word(w in word(5, 12)) {
        prop_assert!(equals(&left_normal_form(&w).to_word(), &w).unwrap());
    }

    #[test]
    fn factorization_is_geodesic(w in word(5, 12)) {
        let (inf, sup, len) = inf_sup(&w);
        let f = geodesic_factorization(&w).unwrap();
        prop_assert_eq!(f.len() as i64, len);
        prop_assert_eq!(len, sup.max(0) - inf.min(0));
        prop_assert!(equals(&f.to_word(), &w).unwrap());
    }

    #[test]
    fn sigma_definite_is_equivalent(w in word(5, 12)) {
        let out = sigma_definite_word(&w).unwrap();
        prop_assert!(is_sigma_definite(&out));
        prop_assert!(equals(&out, &w).unwrap());
    }
}
