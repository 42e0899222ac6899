mod common;

use risus_core::analytics::{detect_targets, TargetFlags};
use risus_core::tagger::Tagger;
use risus_core::Document;

fn targets(text: &str) -> TargetFlags {
    let lex = common::lexicons();
    let doc = Document::new("t", text);
    let tags = Tagger::new(&lex.wordnet).tag(&doc);
    detect_targets(&doc, &tags, &lex.wordlists)
}

#[test]
fn best_man_speech_targets_self_and_other() {
    let t = targets(
        "As best man, it is my job to tell you about the groom, and all the embarrassing things that have \
         happened to him in the 28 years leading up to what was the happiest day of his life until I started this speech",
    );
    assert!(t.self_targeted && t.other_targeted && !t.situation_targeted && t.heuristic);
}

#[test]
fn inanimate_subject_marks_situation() {
    assert!(targets("Cats have nine lives. Makes them ideal for experimentation").situation_targeted);
}

#[test]
fn first_person_complaint() {
    let t = targets("I hate Mondays");
    assert!(t.self_targeted && !t.other_targeted && !t.situation_targeted);
}

#[test]
fn situation_is_the_fallback() {
    let t = targets("Buying guide: find the best outdoor patio umbrella for your home");
    assert!(t.self_targeted || t.other_targeted || t.situation_targeted);
    let none = targets("Rain again.");
    assert!(none.situation_targeted && !none.self_targeted && !none.other_targeted);
}

#[test]
fn flags_serialize_with_heuristic_marker() {
    let json = serde_json::to_value(targets("I hate Mondays")).unwrap();
    assert_eq!(json["heuristic"], true);
}
