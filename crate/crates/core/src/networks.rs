//! Bundled example networks.
//!
//! Structures follow the well-known benchmark networks; the conditional
//! probabilities are authored (strong enough that the generating DAG is
//! recoverable from ~10⁴ rows).

use crate::network::BayesNet;

const MONTY_HALL: &str = include_str!("../networks/monty_hall.json");
const LUNG_CANCER: &str = include_str!("../networks/lung_cancer.json");
const LUNG_CANCER_4: &str = include_str!("../networks/lung_cancer_4vars.json");
const WASTE: &str = include_str!("../networks/waste.json");
const ALARM_15: &str = include_str!("../networks/alarm15.json");

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 5] = ["monty_hall", "lung_cancer_4vars", "lung_cancer", "waste", "alarm15"];

fn parse(doc: &str) -> BayesNet {
    BayesNet::from_json(doc).expect("bundled network is valid")
}

/// Guest → Monty ← Prize, three doors each.
pub fn monty_hall() -> BayesNet {
    parse(MONTY_HALL)
}

/// Pollution → Cancer ← Smoker, Cancer → Xray, Cancer → Dyspnoea.
pub fn lung_cancer() -> BayesNet {
    parse(LUNG_CANCER)
}

/// Lung cancer without Dyspnoea.
pub fn lung_cancer_4vars() -> BayesNet {
    parse(LUNG_CANCER_4)
}

/// Nine binary variables; DustEmission has three parents.
pub fn waste() -> BayesNet {
    parse(WASTE)
}

/// Fifteen binary variables; Catechol has four parents.
pub fn alarm15() -> BayesNet {
    parse(ALARM_15)
}

pub fn by_name(name: &str) -> Option<BayesNet> {
    match name {
        "monty_hall" | "mhp" => Some(monty_hall()),
        "lung_cancer" | "lc" => Some(lung_cancer()),
        "lung_cancer_4vars" | "lc4" => Some(lung_cancer_4vars()),
        "waste" => Some(waste()),
        "alarm15" | "alarm" => Some(alarm15()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_networks_load() {
        let sizes: Vec<usize> = NAMES.iter().map(|n| by_name(n).unwrap().n()).collect();
        assert_eq!(sizes, vec![3, 4, 5, 9, 15]);
    }

    #[test]
    fn shapes() {
        let lc = lung_cancer().structure();
        assert_eq!(lc.edge_count(), 4);
        assert!(lc.has_edge(0, 2) && lc.has_edge(1, 2));
        assert_eq!(waste().structure().in_degree(4), 3);
        assert_eq!(alarm15().structure().in_degree(12), 4);
        assert!(by_name("nope").is_none());
    }
}
