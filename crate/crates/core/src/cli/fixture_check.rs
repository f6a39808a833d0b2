use serde::Serialize;

use crate::netflow::{
    gomory_hu_tree, query_min_cut, ratio_constrained_cut, CapacitatedNetwork, CutResult, Link,
    RhoWindow,
};
use crate::scenarios::{brute_force_min_cut, example_network, fixture_label, fixture_node, ScenarioError};

/// One checked statement about the 9-node example network.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureFact {
    pub statement: String,
    pub observed: String,
    pub passed: bool,
}

fn labels_of(nodes: &[usize]) -> Vec<usize> {
    nodes.iter().map(|&v| fixture_label(v)).collect()
}

fn links_text(links: &[Link]) -> String {
    let parts: Vec<String> = links
        .iter()
        .map(|l| format!("{{{},{}}}", fixture_label(l.lo()), fixture_label(l.hi())))
        .collect();
    parts.join(" ")
}

fn link(a: usize, b: usize) -> Link {
    Link::new(fixture_node(a), fixture_node(b))
}

fn describe(cut: &CutResult) -> String {
    format!(
        "capacity {}, W = {:?}, links {}",
        cut.capacity,
        labels_of(&cut.side_w),
        links_text(&cut.links)
    )
}

fn sides_are(cut: &CutResult, labels: &[usize]) -> bool {
    let mut want: Vec<usize> = labels.iter().map(|&l| fixture_node(l)).collect();
    want.sort_unstable();
    cut.side_w == want || cut.side_w_prime == want
}

/// Verifies the stated facts of the example network with the flow code and
/// with exhaustive enumeration.
pub fn fixture_check() -> Result<Vec<FixtureFact>, ScenarioError> {
    let net: CapacitatedNetwork = example_network();
    let tree = gomory_hu_tree(&net)?;
    let mut facts = Vec::new();

    facts.push(FixtureFact {
        statement: "cut tree has 8 links".into(),
        observed: format!("{} links", tree.links().len()),
        passed: tree.links().len() == 8,
    });

    let all = RhoWindow::new(1.0 / 8.0, 1.0)?;
    let global = ratio_constrained_cut(&tree, &net, all)?;
    let oracle = brute_force_min_cut(&net, None, None)?;
    facts.push(FixtureFact {
        statement: "global minimum cut has capacity 2 and isolates node 7 via {4,7} {7,8}".into(),
        observed: format!("{}; oracle capacity {}", describe(&global), oracle.capacity),
        passed: global.capacity == 2.0
            && oracle.capacity == 2.0
            && sides_are(&global, &[7])
            && global.links == vec![link(4, 7), link(7, 8)],
    });

    let pair = query_min_cut(&tree, &net, fixture_node(1), fixture_node(8))?;
    let oracle = brute_force_min_cut(&net, None, Some((fixture_node(1), fixture_node(8))))?;
    facts.push(FixtureFact {
        statement: "minimum cut between 1 and 8 has capacity 5 via {1,4} {2,5} {3,6}".into(),
        observed: format!("{}; oracle capacity {}", describe(&pair), oracle.capacity),
        passed: pair.capacity == 5.0
            && oracle.capacity == 5.0
            && pair.links == vec![link(1, 4), link(2, 5), link(3, 6)],
    });

    let balanced = ratio_constrained_cut(&tree, &net, RhoWindow::primary())?;
    facts.push(FixtureFact {
        statement: "cut-ratio window [0.3, 1] selects {1,2,3} against the rest".into(),
        observed: describe(&balanced),
        passed: sides_are(&balanced, &[1, 2, 3]) && balanced.capacity == 5.0,
    });
    Ok(facts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fact_holds() {
        let facts = fixture_check().unwrap();
        assert_eq!(facts.len(), 4);
        for f in &facts {
            assert!(f.passed, "{}: {}", f.statement, f.observed);
        }
    }
}
