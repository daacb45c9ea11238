use mcg_core::presentations::*;
use mcg_core::reps::{abelianization, format_invariants, nontrivial_relators, TransvectionRep};
use mcg_core::surface::extension_2_1;
use mcg_core::words::GeneratorSymbol;

#[test]
fn extension_abelianizes_to_ten() {
    let p = extension_2_1().unwrap();
    assert_eq!(p.generators.len(), 4 + 5 + 1);
    assert_eq!(format_invariants(&abelianization(&p)), "[10]");
    for r in &surface_presentation_ids() {
        assert!(p.relator(r).is_some(), "{r}");
    }
}

fn surface_presentation_ids() -> Vec<String> {
    mcg_core::surface::surface_presentation().relators.iter().map(|r| r.id.clone()).collect()
}

#[test]
fn amalgam_relators_are_trivial_in_homology() {
    let sp = SurfaceParams::new(3, 1).unwrap();
    let p = amalgam_3_1();
    let stab = gervais(sp, Mode::Full);
    for r in &stab.relators {
        assert_eq!(p.relator(&r.id).map(|x| &x.word), Some(&r.word));
    }
    let rep = TransvectionRep::gervais(&sp).with_definition(GeneratorSymbol::named("t1"), t1_word_3_1());
    assert_eq!(nontrivial_relators(&p, &rep).unwrap(), Vec::<String>::new());
    assert!(p.relator("Y1").is_some() && p.relator("Y3").is_some());
}
