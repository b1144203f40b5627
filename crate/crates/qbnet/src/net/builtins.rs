//! The three reference networks used throughout the tests and the
//! reproduction suites.

use super::{ModelError, Network, NetworkDoc};

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 3] = ["gamble", "burglar", "lung_cancer"];

/// Returns a builtin network by name.
///
/// - `gamble`: the two-stage gamble chain `U -> G1 -> G2`, all binary.
/// - `burglar`: `Burglar -> Alarm` with `Alarm -> JohnCalls` and
///   `Alarm -> MaryCalls`. The CPT values are reconstructed from the
///   published inference tables; the reconstruction is verified in tests.
/// - `lung_cancer`: `Smoke -> Lung_Cancer -> {Cough, Dyspnea}` with
///   placeholder CPTs (the source values are not recoverable), flagged
///   `unverified` in the metadata. Useful for structure and search demos
///   only.
pub fn builtin(name: &str) -> Result<Network, ModelError> {
    let json = match name {
        "gamble" => GAMBLE,
        "burglar" => BURGLAR,
        "lung_cancer" => LUNG_CANCER,
        other => return Err(ModelError::UnknownBuiltin(other.to_string())),
    };
    let doc: NetworkDoc = serde_json::from_str(json).expect("builtin documents are valid JSON");
    Ok(Network::try_from(doc).expect("builtin documents validate"))
}

const GAMBLE: &str = r#"{
    "name": "gamble",
    "variables": [
        {"name": "U", "states": ["Play", "Not_Play"]},
        {"name": "G1", "states": ["Win", "Lose"]},
        {"name": "G2", "states": ["Play", "Not_Play"]}
    ],
    "parents": {"U": [], "G1": ["U"], "G2": ["G1"]},
    "cpt": {
        "U": {"": [0.5, 0.5]},
        "G1": {"Play": [0.5, 0.5], "Not_Play": [0.5, 0.5]},
        "G2": {"Win": [0.68, 0.32], "Lose": [0.5, 0.5]}
    }
}"#;

const BURGLAR: &str = r#"{
    "name": "burglar",
    "variables": [
        {"name": "Burglar", "states": ["t", "f"]},
        {"name": "Alarm", "states": ["t", "f"]},
        {"name": "JohnCalls", "states": ["t", "f"]},
        {"name": "MaryCalls", "states": ["t", "f"]}
    ],
    "parents": {
        "Burglar": [],
        "Alarm": ["Burglar"],
        "JohnCalls": ["Alarm"],
        "MaryCalls": ["Alarm"]
    },
    "cpt": {
        "Burglar": {"": [0.02, 0.98]},
        "Alarm": {"t": [0.95, 0.05], "f": [0.016, 0.984]},
        "JohnCalls": {"t": [0.9, 0.1], "f": [0.05, 0.95]},
        "MaryCalls": {"t": [0.7, 0.3], "f": [0.01, 0.99]}
    }
}"#;

const LUNG_CANCER: &str = r#"{
    "name": "lung_cancer",
    "variables": [
        {"name": "Smoke", "states": ["t", "f"]},
        {"name": "Lung_Cancer", "states": ["positive", "negative"]},
        {"name": "Cough", "states": ["high", "low"]},
        {"name": "Dyspnea", "states": ["t", "f"]}
    ],
    "parents": {
        "Smoke": [],
        "Lung_Cancer": ["Smoke"],
        "Cough": ["Lung_Cancer"],
        "Dyspnea": ["Lung_Cancer"]
    },
    "cpt": {
        "Smoke": {"": [0.5, 0.5]},
        "Lung_Cancer": {"t": [0.6, 0.4], "f": [0.4, 0.6]},
        "Cough": {"positive": [0.7, 0.3], "negative": [0.3, 0.7]},
        "Dyspnea": {"positive": [0.65, 0.35], "negative": [0.35, 0.65]}
    },
    "metadata": {"cpt_status": "unverified"}
}"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_builtin_is_an_error() {
        assert!(matches!(
            builtin("unknown"),
            Err(ModelError::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn burglar_cpt_values() {
        let net = builtin("burglar").unwrap();
        let b = net.var_index("Burglar").unwrap();
        let a = net.var_index("Alarm").unwrap();
        let j = net.var_index("JohnCalls").unwrap();
        let m = net.var_index("MaryCalls").unwrap();
        assert_eq!(net.cpt(b).rows[0][0], 0.02);
        assert_eq!(net.cpt(a).rows[0][0], 0.95);
        assert_eq!(net.cpt(a).rows[1][0], 0.016);
        assert_eq!(net.cpt(j).rows[0][0], 0.90);
        assert_eq!(net.cpt(j).rows[1][0], 0.05);
        assert_eq!(net.cpt(m).rows[0][0], 0.70);
        assert_eq!(net.cpt(m).rows[1][0], 0.01);
    }

    #[test]
    fn lung_cancer_is_flagged_unverified() {
        let net = builtin("lung_cancer").unwrap();
        assert_eq!(
            net.metadata().get("cpt_status").map(String::as_str),
            Some("unverified")
        );
    }
}
