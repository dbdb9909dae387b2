#!/usr/bin/env python3
"""Independent re-implementation of the commitment layout used to pin the
golden constants in the C++ tests. Run: python3 tests/oracle/golden.py"""
import hashlib
import struct


def H(b: bytes) -> bytes:
    return hashlib.sha256(b).digest()


EMPTY = H(b"")


def leaf(d: bytes) -> bytes:
    return H(b"\x00" + d)


def node(l: bytes, r: bytes) -> bytes:
    return H(b"\x01" + l + r)


def merkle_root(leaves):
    if not leaves:
        return EMPTY
    width = 2
    while width < len(leaves):
        width *= 2
    level = [leaf(x) for x in leaves] + [leaf(EMPTY)] * (width - len(leaves))
    while len(level) > 1:
        level = [node(level[i], level[i + 1]) for i in range(0, len(level), 2)]
    return level[0]


def u32(v):
    return struct.pack(">I", v)


def u64(v):
    return struct.pack(">Q", v)


def message(sending, receiving, msg_type, sender, receiver, payload_hash):
    return u32(sending) + u32(receiving) + u32(msg_type) + sender + receiver + payload_hash


def token(name, fungible, arm, value, issuer, owner, data_hash):
    n = name.encode()
    return u32(len(n)) + n + bytes([1 if fungible else 0, arm]) + u64(value) + u32(issuer) + owner + data_hash


def main():
    d = H(b"leaf-0")
    print("EMPTY_ROOT", EMPTY.hex())
    print("LEAF0", d.hex())
    print("ROOT_SINGLE", merkle_root([d]).hex())
    leaves = [H(f"leaf-{i}".encode()) for i in range(8)]
    print("ROOT_EIGHT", merkle_root(leaves).hex())
    print("ROOT_THREE", merkle_root(leaves[:3]).hex())

    cert = H(b"cert-7")
    sc_node = node(cert, EMPTY)
    print("STC_ONE_CERT", merkle_root([sc_node]).hex())
    tx = H(b"tx-3")
    print("STC_TWO", merkle_root([node(cert, EMPTY), node(EMPTY, merkle_root([tx]))]).hex())

    alice = bytes(range(32))
    bob = bytes(range(32, 64))
    payload_hash = H(b"payload")
    m = message(1, 2, 1, alice, bob, payload_hash)
    print("MSG_DIGEST", H(m).hex())

    ti_amount = token("wBTC", True, 1, 5, 1, alice, EMPTY)
    ti_id = token("wBTC", True, 0, 5, 1, alice, EMPTY)
    print("TI_AMOUNT5", H(ti_amount).hex())
    print("TI_ID5", H(ti_id).hex())


if __name__ == "__main__":
    main()
