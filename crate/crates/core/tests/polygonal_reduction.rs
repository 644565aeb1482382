use plgcat_core::corpus::{dunce_hat, torus};
use plgcat_core::homology::homology;
use plgcat_core::polygonal::{cell_euler_characteristic, one_word_reduction, realize, replay, PasteRule};
use plgcat_core::structure::{refined_inner_connectivity, singular_vertices};
use plgcat_core::SecondSubdivision;

#[test]
fn torus_reduces_without_subdivision() {
    let t = torus();
    let r = one_word_reduction(&t, PasteRule::NonSingular).unwrap();
    assert!(!r.subdivided);
    assert_eq!(r.result.words.len(), 1);
    assert_eq!(r.result.words[0].len(), 14 + 2);
    assert_eq!(replay(&r.initial, &r.steps).unwrap(), r.result);
    let k = realize(&r.result).unwrap();
    assert_eq!(homology(&k).betti, vec![1, 2, 1]);
    assert_eq!(k.euler_characteristic(), 0);
}

#[test]
fn dunce_hat_reduces_after_subdivision() {
    let d = dunce_hat();
    assert!(!singular_vertices(&d).unwrap().is_empty());
    assert!(refined_inner_connectivity(&SecondSubdivision::new(&d)).unwrap().connected);
    let r = one_word_reduction(&d, PasteRule::NonSingular).unwrap();
    assert!(r.subdivided);
    let f = r.complex.f_vector()[2];
    assert_eq!(f, 17 * 36);
    assert_eq!(r.result.words.len(), 1);
    assert_eq!(r.result.words[0].len(), f + 2);
    assert_eq!(replay(&r.initial, &r.steps).unwrap(), r.result);
    assert_eq!(cell_euler_characteristic(&r.result).unwrap(), 1);
    let k = realize(&r.result).unwrap();
    assert_eq!(homology(&k), homology(&d));
    assert_eq!(k.euler_characteristic(), 1);
}
