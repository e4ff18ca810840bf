use census::genericity::{self, Lambda};
use census::presentations::{
    recover_relator, search_isomorphic, CandidatePool, ClassParams, Presentation, SearchBudget,
};
use census::symmetry::{all_relabelings, canonical_form, Relabeling};
use census::words::{sample_cyclically_reduced, trial_rng, Word};
use census::Error;

fn generic(seed: u64) -> Word {
    let sixth = Lambda::new(1, 6).unwrap();
    let rel = all_relabelings(2).unwrap();
    (0..)
        .map(|t| sample_cyclically_reduced(2, 60, &mut trial_rng(seed, t)))
        .find(|x| {
            genericity::in_e_with(x, sixth, &rel)
                && genericity::satisfies_c_prime(x, sixth).unwrap().satisfied
        })
        .unwrap()
}

fn class() -> ClassParams {
    ClassParams {
        k: 2,
        lambda: Lambda::new(1, 6).unwrap(),
        max_len: 60,
        pool: CandidatePool::Images,
    }
}

fn budget() -> SearchBudget {
    SearchBudget {
        map_len: 1,
        depth: 1,
        ..SearchBudget::default()
    }
}

#[test]
fn identity_case_returns_an_orbit_mate() {
    let r = generic(1);
    let pi = Presentation::new(2, vec![r.clone()]).unwrap();
    let found = search_isomorphic(&pi, &class(), &budget()).unwrap();
    assert_eq!(
        canonical_form(&found.relator, 2).unwrap(),
        canonical_form(&r, 2).unwrap()
    );
    assert_eq!(found.depth, 1);
    assert_eq!(found.size, 60 + 2 + 2 + 1);
}

#[test]
fn relabeled_rotation_is_found() {
    for seed in 2..6 {
        let r = generic(seed);
        let tau = Relabeling::parse(2, "1:2-,2:1+").unwrap();
        let pi = Presentation::new(2, vec![tau.apply(&r).rotate(23)]).unwrap();
        let found = search_isomorphic(&pi, &class(), &budget()).unwrap();
        assert_eq!(
            canonical_form(&found.relator, 2).unwrap(),
            canonical_form(&r, 2).unwrap()
        );
        let u = Word::from_letters(r[..10].to_vec()).unwrap();
        assert_eq!(recover_relator(&pi, &u, &class(), &budget()).unwrap(), r);
    }
}

#[test]
fn trivial_group_is_not_found() {
    let pi = Presentation::new(1, vec![Word::parse("a", false).unwrap()]).unwrap();
    for map_len in 1..=2 {
        let b = SearchBudget {
            map_len,
            depth: 2,
            ..SearchBudget::default()
        };
        assert_eq!(search_isomorphic(&pi, &class(), &b), Err(Error::NotFound));
    }
}

#[test]
fn refuses_oversized_map_spaces() {
    let pi = Presentation::new(3, vec![Word::parse("abc", false).unwrap()]).unwrap();
    let b = SearchBudget {
        map_len: 4,
        max_map_pairs: 1000,
        ..SearchBudget::default()
    };
    assert!(matches!(
        search_isomorphic(&pi, &class(), &b),
        Err(Error::BudgetExceeded { .. })
    ));
}
