//! Decimal-string encodings for big numbers in JSON output.

pub mod bigint {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

pub mod bigint_vec {
    use num_bigint::BigInt;
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer, T: AsRef<[BigInt]>>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        let v = v.as_ref();
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| s.parse().map_err(D::Error::custom)).collect()
    }
}

pub mod bigrat {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        match s.split_once('/') {
            Some((n, q)) => {
                let n: BigInt = n.parse().map_err(D::Error::custom)?;
                let q: BigInt = q.parse().map_err(D::Error::custom)?;
                Ok(BigRational::new(n, q))
            }
            None => Ok(BigRational::from_integer(s.parse().map_err(D::Error::custom)?)),
        }
    }
}
