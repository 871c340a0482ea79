//! Shared inputs for the benchmarks.

use precax_core::corpus;
use precax_core::measures::MeasureKind;
use precax_core::{AcceptingPetriNet, EventLog};

/// A named (log, model) pair from the corpus.
pub struct Case {
    pub name: &'static str,
    pub log: EventLog,
    pub model: AcceptingPetriNet,
}

fn case(name: &'static str, log: &str, model: &str) -> Case {
    Case {
        name,
        log: corpus::log(log).expect("corpus log"),
        model: corpus::model(model).expect("corpus model"),
    }
}

/// Corpus pairs each measure is benchmarked on.
pub fn cases_for(kind: MeasureKind) -> Vec<Case> {
    match kind {
        MeasureKind::Etc | MeasureKind::OneAlignEtc | MeasureKind::AllAlignEtc => vec![
            case("fig4_l2", "fig4_log_l2", "fig4_model"),
            case("fig5b", "fig5_log", "fig5b_flower_tau"),
        ],
        MeasureKind::Pcc => vec![
            case("fig7a", "fig7_log", "fig7a_loop"),
            case("fig8_l2", "fig8_log_l2", "fig8_flower"),
        ],
        MeasureKind::NegativeEvent => vec![case("fig6_m1", "fig6_log_template", "fig6_m1")],
        MeasureKind::Greco | MeasureKind::SimpleBa | MeasureKind::AdvancedBa => {
            let fig2 = Case {
                name: "fig2",
                log: precax_core::parse_log("2x a,c\n1x b,d,b,c,a,d\n1x a,c,b,d").expect("log text"),
                model: corpus::model("fig2_loop_wfnet").expect("corpus model"),
            };
            vec![fig2, case("fig6_m2", "fig6_log_template", "fig6_m2")]
        }
    }
}
