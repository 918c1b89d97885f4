//! Building a tree by hand, checking it against the meta-model axioms and
//! counting the triples it maps to.

use sparql_anything::model::{
    tree_to_graph, validate_tree, Datatype, FacadeContainer, FacadeTree, FacadeValue, MintingConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let places = FacadeContainer::new()
        .with(1, FacadeContainer::new().with("name", FacadeValue::string("Ukrayina")))
        .with(2, FacadeContainer::new().with("name", FacadeValue::string("Moskva, Rossiya")));
    let good = FacadeTree::new(
        FacadeContainer::new()
            .with("fc", FacadeValue::string("Kazimir Malevich"))
            .with("id", FacadeValue::integer(1561))
            .with("places", places),
    );
    println!("valid: {}", validate_tree(&good).is_empty());
    println!("triples: {}", tree_to_graph(&good, &MintingConfig::default())?.len());

    let mut bad = FacadeContainer::typed("");
    bad.push("", FacadeValue::new_unchecked("twelve", Datatype::Integer));
    bad.push("x", FacadeValue::string("a"));
    bad.push("x", FacadeValue::string("b"));
    let bad = FacadeTree::new(bad);
    for v in validate_tree(&bad).violations {
        println!("{:<22} {:<4} {}", v.axiom.id(), v.path, v.detail);
    }
    if let Err(e) = tree_to_graph(&bad, &MintingConfig::default()) {
        println!("mapping refused: {e}");
    }
    Ok(())
}
