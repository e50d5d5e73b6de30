use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Placeholder emitted by the scaffolder for values the author still has to supply.
pub const FILL: &str = "__FILL__";

/// An optional report leaf. Absence is data: it feeds grading rather than failing a parse.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Field<T> {
    #[default]
    Absent,
    /// The scaffold placeholder, treated as absent for grading.
    Fill,
    Value(T),
}

impl<T> Field<T> {
    pub fn value(&self) -> Option<&T> {
        match self {
            Field::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, Field::Absent)
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Field::Value(_))
    }
}

impl<T: Copy> Field<T> {
    pub fn get(&self) -> Option<T> {
        self.value().copied()
    }
}

impl<T> From<T> for Field<T> {
    fn from(v: T) -> Self {
        Field::Value(v)
    }
}

impl<T: Serialize> Serialize for Field<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            // Absent fields are skipped by the containers; `null` only shows up inside lists.
            Field::Absent => s.serialize_none(),
            Field::Fill => s.serialize_str(FILL),
            Field::Value(v) => v.serialize(s),
        }
    }
}

impl<'de, T: DeserializeOwned> Deserialize<'de> for Field<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::Null => Ok(Field::Absent),
            serde_json::Value::String(s) if s == FILL => Ok(Field::Fill),
            _ => serde_json::from_value(v).map(Field::Value).map_err(D::Error::custom),
        }
    }
}

/// A prose leaf: either a plain string or a redaction record pointing at an attestation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Text {
    pub text: String,
    pub redacted: bool,
    pub attestation: Option<String>,
}

impl Text {
    pub fn new(s: impl Into<String>) -> Self {
        Text { text: s.into(), redacted: false, attestation: None }
    }

    /// Whether the text counts as stated. `attestation_exists` resolves attestation ids.
    pub fn is_stated(&self, attestation_exists: &dyn Fn(&str) -> bool) -> bool {
        if self.redacted {
            return self.attestation.as_deref().is_some_and(attestation_exists);
        }
        let t = self.text.trim();
        !t.is_empty() && t != FILL
    }
}

impl From<&str> for Text {
    fn from(s: &str) -> Self {
        Text::new(s)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TextRecord {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    text: String,
    #[serde(default)]
    redacted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    attestation: Option<String>,
}

impl Serialize for Text {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.redacted && self.attestation.is_none() {
            return s.serialize_str(&self.text);
        }
        TextRecord { text: self.text.clone(), redacted: self.redacted, attestation: self.attestation.clone() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Text {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Plain(String),
            Record(TextRecord),
        }
        Ok(match Repr::deserialize(d).map_err(|_| D::Error::custom("expected a string or a {text, redacted, attestation} object"))? {
            Repr::Plain(text) => Text::new(text),
            Repr::Record(r) => Text { text: r.text, redacted: r.redacted, attestation: r.attestation },
        })
    }
}
