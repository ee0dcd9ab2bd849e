use maua_core::{DecisionProblem, Override};

const IMPORTANCE: &str = "importance";

/// Parse `ATTRIBUTE.importance=V` or `OPTION.ATTRIBUTE=V`. Names may contain
/// dots, so the target is resolved against the problem's own names.
pub fn parse(spec: &str, problem: &DecisionProblem) -> Result<Override, String> {
    let (target, value) = spec
        .rsplit_once('=')
        .ok_or_else(|| format!("--set {spec:?}: expected TARGET=VALUE"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("--set {spec:?}: {value:?} is not a number"))?;

    let mut candidates = Vec::new();
    for (i, _) in target.match_indices('.') {
        let (head, tail) = (&target[..i], &target[i + 1..]);
        if tail == IMPORTANCE && problem.attribute_index(head).is_some() {
            candidates.push(Override::Importance {
                attribute: head.to_owned(),
                importance: value,
            });
        }
        if problem.option_index(head).is_some() && problem.attribute_index(tail).is_some() {
            candidates.push(Override::Value {
                option: head.to_owned(),
                attribute: tail.to_owned(),
                value,
                scenario: None,
            });
        }
    }
    match candidates.len() {
        1 => Ok(candidates.remove(0)),
        0 => Err(format!("--set {spec:?}: no matching attribute or option")),
        _ => Err(format!("--set {spec:?}: ambiguous target")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use maua_core::{Attribute, OptionRecord};

    fn problem() -> DecisionProblem {
        let mut p = DecisionProblem::new("p");
        p.attributes = vec![Attribute::direct("E", 1.0), Attribute::direct("v1.2", 1.0)];
        p.options = vec![OptionRecord::single(
            "Plan A.x",
            [("E", 50.0), ("v1.2", 50.0)],
        )];
        p
    }

    #[test]
    fn resolves_dotted_names() {
        let p = problem();
        assert_eq!(
            parse("Plan A.x.v1.2=70", &p).unwrap(),
            Override::Value {
                option: "Plan A.x".into(),
                attribute: "v1.2".into(),
                value: 70.0,
                scenario: None
            }
        );
        assert_eq!(
            parse("v1.2.importance=3", &p).unwrap(),
            Override::Importance {
                attribute: "v1.2".into(),
                importance: 3.0
            }
        );
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        let p = problem();
        assert!(parse("E=3", &p).is_err());
        assert!(parse("E.importance", &p).is_err());
        assert!(parse("E.importance=abc", &p).is_err());
        assert!(parse("Plan B.E=3", &p).is_err());
    }
}
