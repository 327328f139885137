use std::fs;
use std::path::Path;

use symdyn::frontend::{builtin_document, parse_spec, print_spec, System};
use symdyn::odometer::{rs_extension_stages, rs_extension_value, RsExtensionSource};
use symdyn::seq::EventuallyPeriodic;
use symdyn::stream::prefix;
use symdyn::subst::{group_cover, Substitution};

fn oracle() -> serde_json::Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/oracle_values.json");
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn as_vec(v: &serde_json::Value) -> Vec<usize> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect()
}

#[test]
fn rs_extension_matches_stage_tables() {
    let o = oracle();
    let zero = EventuallyPeriodic::constant(false);
    let alt = EventuallyPeriodic::new(vec![], vec![true, false]).unwrap();
    assert_eq!(prefix(&RsExtensionSource::new(zero.clone()), 16), as_vec(&o["rs_extension_zero_choices_prefix16"]));
    assert_eq!(prefix(&RsExtensionSource::new(alt.clone()), 16), as_vec(&o["rs_extension_alternating_choices_prefix16"]));

    let stages = rs_extension_stages(&zero, 8).unwrap();
    assert_eq!(stages[0].undefined_count(), 2);
    assert_eq!(stages[1].defined_levels(), as_vec(&o["rs_extension_defined_levels_stage2"]));
    assert_eq!(stages[2].defined_levels(), as_vec(&o["rs_extension_defined_levels_stage3"]));

    // closed form agrees with the first stage that defines n
    for choices in [zero, alt] {
        let stages = rs_extension_stages(&choices, 12).unwrap();
        for n in 0..1000u64 {
            let first = stages.iter().find_map(|s| s.values[n as usize % s.values.len()]);
            if let Some(v) = first {
                assert_eq!(rs_extension_value(&choices, n).unwrap(), v, "n = {n}");
            }
        }
    }
}

#[test]
fn builtins_build_and_round_trip() {
    let doc = builtin_document();
    assert_eq!(parse_spec(&print_spec(&doc)).unwrap(), doc);
    for d in doc.systems() {
        let system = System::build(&doc, &d.name().text).unwrap();
        let word = prefix(system.source().unwrap().as_ref(), 64);
        assert!(word.iter().all(|&s| s < system.alphabet_size()));
    }
}

#[test]
fn file_cover_matches_library_cover() {
    let text = "substitution h on {a, b, c} { a -> \"aabaa\"; b -> \"bcabb\"; c -> \"cbccc\" }\n\
                morse hc over cover-of h blocks [ repeat \"01200\" ]\n";
    let doc = parse_spec(text).unwrap();
    let System::Morse(from_file) = System::build(&doc, "hc").unwrap() else { panic!("expected a Morse system") };
    let (_, spec) = group_cover(&Substitution::herning()).unwrap();
    assert_eq!(from_file.group().order(), 6);
    assert_eq!(spec.block(0), &[0, 1, 2, 0, 0]);
    assert_eq!(from_file.stage_word(3).unwrap(), spec.stage_word(3).unwrap());
}
