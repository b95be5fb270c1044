use std::collections::HashSet;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the five textual representations of a topic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    InformationNeed,
    Background,
    WorkTask,
    IdealAnswer,
    /// The original query.
    Keywords,
}

impl Representation {
    /// The four context representations, excluding the query itself.
    pub const CONTEXT: [Representation; 4] = [
        Representation::InformationNeed,
        Representation::Background,
        Representation::WorkTask,
        Representation::IdealAnswer,
    ];

    pub const ALL: [Representation; 5] = [
        Representation::InformationNeed,
        Representation::Background,
        Representation::WorkTask,
        Representation::IdealAnswer,
        Representation::Keywords,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Representation::InformationNeed => "information_need",
            Representation::Background => "background",
            Representation::WorkTask => "work_task",
            Representation::IdealAnswer => "ideal_answer",
            Representation::Keywords => "keywords",
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown representation `{0}`")]
pub struct UnknownRepresentation(pub String);

impl FromStr for Representation {
    type Err = UnknownRepresentation;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Representation::ALL
            .into_iter()
            .find(|r| r.name() == s.trim())
            .ok_or_else(|| UnknownRepresentation(s.to_string()))
    }
}

/// A search topic with its five representations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Topic {
    pub id: String,
    pub information_need: String,
    pub background: String,
    pub work_task: String,
    pub ideal_answer: String,
    pub keywords: String,
}

impl Topic {
    pub fn text(&self, rep: Representation) -> &str {
        match rep {
            Representation::InformationNeed => &self.information_need,
            Representation::Background => &self.background,
            Representation::WorkTask => &self.work_task,
            Representation::IdealAnswer => &self.ideal_answer,
            Representation::Keywords => &self.keywords,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.id.trim().is_empty() {
            return Err("topic id is empty".into());
        }
        if self.keywords.trim().is_empty() {
            return Err(format!("topic `{}` has empty keywords", self.id));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum TopicError {
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Reads line-delimited JSON topic records. Blank lines are skipped.
pub fn parse_topics<R: BufRead>(reader: R) -> Result<Vec<Topic>, TopicError> {
    let mut topics = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let invalid = |message: String| TopicError::Invalid {
            line: lineno,
            message,
        };
        let topic: Topic = serde_json::from_str(&line).map_err(|e| invalid(e.to_string()))?;
        topic.validate().map_err(invalid)?;
        if !seen.insert(topic.id.clone()) {
            return Err(invalid(format!("duplicate topic id `{}`", topic.id)));
        }
        topics.push(topic);
    }
    Ok(topics)
}

pub fn parse_topics_str(input: &str) -> Result<Vec<Topic>, TopicError> {
    parse_topics(input.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"{"id":"t1","information_need":"n","background":"b","work_task":"w","ideal_answer":"i","keywords":"k"}"#;

    #[test]
    fn parses_records_and_skips_blank_lines() {
        let input = format!("{GOOD}\n\n");
        let topics = parse_topics_str(&input).unwrap();
        assert_eq!(topics.len(), 1);
        assert_eq!(topics[0].text(Representation::WorkTask), "w");
    }

    #[test]
    fn empty_input() {
        assert!(parse_topics_str("").unwrap().is_empty());
    }

    #[test]
    fn rejects_unknown_and_missing_fields() {
        let extra = GOOD.replace("}", r#","extra":"x"}"#);
        let err = parse_topics_str(&format!("{GOOD}\n{extra}")).unwrap_err();
        assert!(matches!(err, TopicError::Invalid { line: 2, .. }), "{err}");

        let missing = r#"{"id":"t1","keywords":"k"}"#;
        assert!(parse_topics_str(missing).is_err());
    }

    #[test]
    fn rejects_empty_keywords_and_ids() {
        let no_kw = GOOD.replace(r#""keywords":"k""#, r#""keywords":"  ""#);
        assert!(parse_topics_str(&no_kw).is_err());
        let no_id = GOOD.replace(r#""id":"t1""#, r#""id":"""#);
        assert!(parse_topics_str(&no_id).is_err());
    }

    #[test]
    fn rejects_duplicate_ids() {
        let err = parse_topics_str(&format!("{GOOD}\n{GOOD}")).unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn empty_context_fields_are_allowed() {
        let t = GOOD.replace(r#""background":"b""#, r#""background":"""#);
        assert_eq!(parse_topics_str(&t).unwrap()[0].background, "");
    }

    #[test]
    fn representation_names_round_trip() {
        for rep in Representation::ALL {
            assert_eq!(rep.name().parse::<Representation>().unwrap(), rep);
        }
    }
}
