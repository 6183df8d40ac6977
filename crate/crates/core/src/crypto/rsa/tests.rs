use super::*;
use crate::rng::SplitMix64;

pub(crate) mod fixtures {
    use super::super::RsaPrivateKey;
    use crate::bignum::BigInt;

    pub const N_1024: &str = "E1AF5EE4BE515F663628A56C999336A8D37414735AB05EC74898A6FC8A1B835651A8BDD82D8088E220AC7591482CBBC3C65DBAEB34DDD46E311C2DAC0ECE04538B4196A01B5AC7A2C1700CC582284AD8E1A3D20B8C7392BABF8BF390D51A09E2F4370D34AAFE1D3FA2E97B6702BDB002B5C69D41CE2DB3767C6E2F0572B2AF11";
    pub const E_1024: &str = "010001";
    pub const D_1024: &str = "AA90198D92F078C30CC7674E4E3ADE2275BCD2FFE3584C291C8A9219665F28C181F19F98D3BAC2B8F3ACA325EB80335FE079521D14D55A08F580B05BCACC94A30BB5CE4592A13FF0AC09E84C96FF4601BBDFDBB9DC3A91E95801CBD5138D91C5FDC87285EC913ADF4E354684E533507A1FB5D50B0AEA39A31D357039360A9929";
    pub const P_1024: &str = "F6F273DEFD10DB2262BAC51D5FFAF5182412F526A9BEECA8D64761B42F4F482EB621ECD804AACB6B64149E860D08D3E239844AD8F30D5556CEC039988B4EBEBF";
    pub const Q_1024: &str = "E9F560D26B0714AC0E109B67EC3274FF380D97DD29F7C70E6AEBCB84A3E055749BF3BC5BB411645F06D500F7055084C537B15EC756811C423B3148F790B6D62F";

    pub const N_2048: &str = "BF02E0D554762BBE604E7FB9878212B18B8F63FA967CB4E30942918F8C6B684226E9E8787F2979E1640CB9408FBDC31B98DC8D38E9B0A8C06E77BACF4815AA173D8B5FC26751B0A80E42C8CF6995599B781E068EFEB6D013A000A952BCB8454CCD8201997BA71C04F399B47878946797985940054B2835EA240CEDBCC2CDD797DDA09A3695E41933267DD8B66F6A2335206221B02CC14410CCFEA71329E0ED2EA15C6C3672253153A82B4417F7A38C4CBAD1A36C4469DD895794919D0E21A1226D2AD4EE3B7DFFF1A0CDB2C9C70CDFD1FE2F17018B5E8E2C5208F4E1066BDA28D0644097CC4034345C3009B99557E3AB149EF2A6A8EE262EC766295EC7559701";
    pub const E_2048: &str = "010001";
    pub const D_2048: &str = "0DDD529E897BEE5EEA34A876BA0C49F9132D3C4F931EC82E769C9B5E350E12CA4272D609F108FCACCC8B53E308CBF85E8770F2DB3FB32FFC8FC8270A26AC53E54DF550E51684CA72D85E269F4F85A4B4713A94B54A6DD09AAC118038DE33EDEBCE3AF28CC679F1C1B640E0E5A1B2FBF5F7FBFA76A7E6EA4AED84F6B8ADD72D1FDBB9B775ADC2DED8CF8A37393B616AB9B21B679FD436A0D2E91147FAE7D78CE9123CC15417CAB5B1DBE4E9FE3EE7F9624C3E28FA14ECD7BF222E69AFEAB2341F93A6E71C93C0C824E0840F03381DE7764962661604364B966406C2B4DEC207EAEFC4898E23079B2E897E12A50C6D21287BB6C944BBDA23C51844F052CB728F95";
    pub const P_2048: &str = "E57011C0F2DA93D7412BA1B0D87AC89972EE51384C4403E0883FC408F3CC6BFC98184F63D3559128254593499F8C0813E70D41EE9B5C10D985AC80D2460F006869B8AB77ED77EE8FB049FEB70BC487B45E59163F1709BA600E1C14C3CDE21059196EA26569A8E7ED41DA58ABFD921F9401B8B4FD130A48B440ABB060A37A0C87";
    pub const Q_2048: &str = "D51FF2AB7E85514864CEF8C97FC269900FFBA8AFA3701E25F11B2D82A8E5CE631BA060276D4FBBE87ABAC082F4409DA97BA58862EB5BCBB82A4BBD252BBB82A7D5FFFA7497082C17E8644CF2A68E98938ACFA09F75564A881A1A419800AEE275E9E5ABD46453B1C4146F9F8E7A1C52D4597D9FE6C464B839C8C2152029EB6A37";

    pub fn big(hex_str: &str) -> BigInt {
        BigInt::from_raw(&hex::decode(hex_str).unwrap(), false)
    }

    pub fn key_1024() -> RsaPrivateKey {
        RsaPrivateKey {
            n: Some(big(N_1024)),
            e: Some(big(E_1024)),
            d: Some(big(D_1024)),
            p: Some(big(P_1024)),
            q: Some(big(Q_1024)),
            ..Default::default()
        }
    }

    pub fn key_2048() -> RsaPrivateKey {
        RsaPrivateKey {
            n: Some(big(N_2048)),
            e: Some(big(E_2048)),
            d: Some(big(D_2048)),
            p: Some(big(P_2048)),
            q: Some(big(Q_2048)),
            ..Default::default()
        }
    }
}

use crate::crypto::sha2::DigestVariant;
use fixtures::*;

fn completed(partial: RsaPrivateKey) -> RsaPrivateKey {
    populate_private_key(&partial).expect("fixture key populates").0
}

#[test]
fn sign_verify_round_trip_all_modes() {
    let key = completed(key_2048());
    let n = key.n.clone().unwrap();
    let e = key.e.clone().unwrap();
    let msg = b"attack at dawn";
    for hash in [DigestVariant::Sha2_256, DigestVariant::Sha2_384, DigestVariant::Sha2_512] {
        for mode in [
            RsaPaddingMode::Pkcs1V15,
            RsaPaddingMode::Pss { salt_len: hash.output_len(), salt: None },
            RsaPaddingMode::Pss { salt_len: 0, salt: None },
        ] {
            let sig = rsa_sign(&mode, hash, &key, msg).unwrap();
            assert_eq!(sig.len(), n.byte_length_stripped());
            assert!(rsa_verify(&mode, hash, &n, &e, msg, &sig).unwrap());
            let mut bad = sig.clone();
            bad[10] ^= 1;
            assert!(!rsa_verify(&mode, hash, &n, &e, msg, &bad).unwrap());
        }
    }
}

#[test]
fn primitive_mode_range_checks() {
    let key = completed(key_1024());
    let n = key.n.clone().unwrap();
    let e = key.e.clone().unwrap();
    let msg = vec![0x42u8; 64];
    let sig = rsa_sign(&RsaPaddingMode::Primitive, DigestVariant::Sha2_256, &key, &msg).unwrap();
    assert!(rsa_verify(&RsaPaddingMode::Primitive, DigestVariant::Sha2_256, &n, &e, &msg, &sig)
        .unwrap());
    // message == n is out of range
    let (n_bytes, _) = n.to_raw();
    assert_eq!(
        rsa_sign(&RsaPaddingMode::Primitive, DigestVariant::Sha2_256, &key, &n_bytes),
        Err(RsaError::MessageOutOfRange)
    );
}

#[test]
fn oaep_round_trip_and_bounds() {
    let key = completed(key_2048());
    let n = key.n.clone().unwrap();
    let e = key.e.clone().unwrap();
    let hash = DigestVariant::Sha2_256;
    let mode = RsaPaddingMode::Oaep { label: vec![], seed: None };
    let pt = b"top secret";
    let ct = rsa_encrypt(&mode, hash, &n, &e, pt).unwrap();
    assert_eq!(rsa_decrypt(&mode, hash, &key, &ct).unwrap(), pt);

    // exact boundary: k - 2*hLen - 2
    let max_len = n.byte_length_stripped() - 2 * hash.output_len() - 2;
    let big_pt = vec![0x5A; max_len];
    let ct = rsa_encrypt(&mode, hash, &n, &e, &big_pt).unwrap();
    assert_eq!(rsa_decrypt(&mode, hash, &key, &ct).unwrap(), big_pt);
    assert_eq!(
        rsa_encrypt(&mode, hash, &n, &e, &vec![0x5A; max_len + 1]),
        Err(RsaError::MessageTooLong)
    );
}

#[test]
fn oaep_decrypt_garbage_is_clean_error() {
    let key = completed(key_1024());
    let mode = RsaPaddingMode::Oaep { label: vec![], seed: None };
    let mut rng = SplitMix64::new(7);
    for _ in 0..20 {
        let mut ct = vec![0u8; 128];
        rng.fill_bytes(&mut ct);
        ct[0] = 0; // keep below n
        match rsa_decrypt(&mode, DigestVariant::Sha2_256, &key, &ct) {
            Err(RsaError::InvalidPadding) | Err(RsaError::MessageOutOfRange) => {}
            Ok(_) => panic!("random ciphertext decrypted"),
            Err(e) => panic!("unexpected error {e:?}"),
        }
    }
}

#[test]
fn one_byte_modulus_is_clean_error_everywhere() {
    let tiny = RsaPrivateKey {
        n: Some(fixtures::big("0D")),
        e: Some(fixtures::big("03")),
        d: Some(fixtures::big("07")),
        ..Default::default()
    };
    let n = tiny.n.clone().unwrap();
    let e = tiny.e.clone().unwrap();
    let hash = DigestVariant::Sha2_256;
    for mode in [
        RsaPaddingMode::Pkcs1V15,
        RsaPaddingMode::Pss { salt_len: 32, salt: None },
    ] {
        assert_eq!(rsa_sign(&mode, hash, &tiny, b"m"), Err(RsaError::ModulusTooSmall));
    }
    assert_eq!(
        rsa_encrypt(&RsaPaddingMode::Oaep { label: vec![], seed: None }, hash, &n, &e, b"m"),
        Err(RsaError::ModulusTooSmall)
    );
    // primitive mode still works within range on a tiny modulus
    let sig = rsa_sign(&RsaPaddingMode::Primitive, hash, &tiny, &[0x05]).unwrap();
    assert_eq!(sig.len(), 1);
    // verify is total: a verdict, not a crash
    let verdict = rsa_verify(&RsaPaddingMode::Pss { salt_len: 32, salt: None }, hash, &n, &e, b"m", &sig);
    assert!(matches!(verdict, Ok(false) | Err(_)));
}

#[test]
fn pss_salt_longer_than_em_allows_clean_reject() {
    let key = completed(key_1024());
    let n = key.n.clone().unwrap();
    let e = key.e.clone().unwrap();
    let hash = DigestVariant::Sha2_256;
    // emLen for 1024-bit key = 128; salt_len beyond emLen - hLen - 2 = 94
    let mode = RsaPaddingMode::Pss { salt_len: 95, salt: None };
    let sig = vec![0x01; 128];
    assert_eq!(rsa_verify(&mode, hash, &n, &e, b"m", &sig), Ok(false));
    assert!(matches!(
        rsa_sign(&RsaPaddingMode::Pss { salt_len: 95, salt: Some(vec![0u8; 95]) }, hash, &key, b"m"),
        Err(RsaError::ModulusTooSmall)
    ));
}

#[test]
fn leading_zero_modulus_bytes_do_not_change_behavior() {
    let key = completed(key_1024());
    let hash = DigestVariant::Sha2_256;
    let mode = RsaPaddingMode::Pkcs1V15;
    let base_sig = rsa_sign(&mode, hash, &key, b"msg").unwrap();
    let (n_bytes, _) = key.n.clone().unwrap().to_raw();
    let (e_bytes, _) = key.e.clone().unwrap().to_raw();
    for zeros in 0..=4usize {
        let mut padded_n = vec![0u8; zeros];
        padded_n.extend_from_slice(&n_bytes);
        let mut padded_e = vec![0u8; zeros];
        padded_e.extend_from_slice(&e_bytes);
        let n = crate::bignum::BigInt::from_raw(&padded_n, false);
        let e = crate::bignum::BigInt::from_raw(&padded_e, false);
        assert_eq!(n.byte_length_stripped(), n_bytes.len());
        assert!(rsa_verify(&mode, hash, &n, &e, b"msg", &base_sig).unwrap());
    }
}

#[test]
fn verify_is_total_over_arbitrary_signatures() {
    let key = completed(key_1024());
    let n = key.n.clone().unwrap();
    let e = key.e.clone().unwrap();
    let mut rng = SplitMix64::new(99);
    for mode in [
        RsaPaddingMode::Pkcs1V15,
        RsaPaddingMode::Pss { salt_len: 32, salt: None },
        RsaPaddingMode::Primitive,
    ] {
        for len in [0usize, 1, 64, 128, 129, 300] {
            let mut sig = vec![0u8; len];
            rng.fill_bytes(&mut sig);
            let verdict = rsa_verify(&mode, DigestVariant::Sha2_256, &n, &e, b"m", &sig);
            assert!(matches!(verdict, Ok(_) | Err(_)));
        }
    }
}

#[test]
fn random_message_round_trips_per_mode_and_size() {
    let mut rng = SplitMix64::new(2024);
    for key in [completed(key_1024()), completed(key_2048())] {
        let n = key.n.clone().unwrap();
        let e = key.e.clone().unwrap();
        let k = n.byte_length_stripped();
        for hash in [DigestVariant::Sha2_256, DigestVariant::Sha2_512] {
            for _ in 0..10 {
                let mut msg = vec![0u8; (rng.next_below(48) + 1) as usize];
                rng.fill_bytes(&mut msg);

                let v15 = rsa_sign(&RsaPaddingMode::Pkcs1V15, hash, &key, &msg).unwrap();
                assert!(rsa_verify(&RsaPaddingMode::Pkcs1V15, hash, &n, &e, &msg, &v15).unwrap());

                // PSS and OAEP need room for two digests; skip combos where
                // the digest does not fit the modulus (SHA2-512 at 1024 bits)
                if k >= 2 * hash.output_len() + 2 + 2 {
                    let pss_mode = RsaPaddingMode::Pss { salt_len: hash.output_len(), salt: None };
                    let pss = rsa_sign(&pss_mode, hash, &key, &msg).unwrap();
                    assert!(rsa_verify(&pss_mode, hash, &n, &e, &msg, &pss).unwrap());

                    let oaep_mode = RsaPaddingMode::Oaep { label: vec![], seed: None };
                    let ct = rsa_encrypt(&oaep_mode, hash, &n, &e, &msg).unwrap();
                    assert_eq!(rsa_decrypt(&oaep_mode, hash, &key, &ct).unwrap(), msg);
                }

                let mut raw = vec![0u8; k - 1];
                rng.fill_bytes(&mut raw);
                let ct = rsa_encrypt(&RsaPaddingMode::Primitive, hash, &n, &e, &raw).unwrap();
                let pt = rsa_decrypt(&RsaPaddingMode::Primitive, hash, &key, &ct).unwrap();
                assert_eq!(pt[pt.len() - raw.len()..], raw[..]);
            }
        }
    }
}
