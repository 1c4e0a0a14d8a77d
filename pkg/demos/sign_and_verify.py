"""Key generation, signing, and verification across the three backends.

Run:  python demos/sign_and_verify.py
"""

from sparsedil import Backend, Dilithium, SignTrace

message = b"General Kenobi, years ago you served my father in the Clone Wars"

for level in (2, 3, 5):
    dil = Dilithium(level)
    pk, sk = dil.keygen(seed=bytes([level]) * 32)
    print(f"\n=== level {level} ===")
    print(f"public key {len(pk)} bytes, secret key {len(sk)} bytes; "
          f"default backend: {dil.backend.value}")

    sigs = {}
    for backend in Backend:
        trace = SignTrace()
        sig = dil.sign(sk, message, backend=backend, trace=trace)
        ok = dil.verify(pk, message, sig)
        sigs[backend.value] = sig
        print(f"  {backend.value:13s} -> {len(sig)} bytes, verified={ok}, "
              f"restarts={trace.restarts}, "
              f"c*s modular mults={trace.cs1_modmuls + trace.cs2_modmuls}")

    identical = len(set(sigs.values())) == 1
    print(f"  signatures byte-identical across backends: {identical}")

    tampered = bytearray(sigs["ntt"])
    tampered[40] ^= 0x01
    print(f"  tampered signature accepted: {dil.verify(pk, message, bytes(tampered))}")
