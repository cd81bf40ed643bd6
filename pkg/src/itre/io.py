"""Image, PFM and CSV input/output."""

import csv

import numpy as np
from PIL import Image

from .image_core import to_unit_range

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


def read_image(path):
    """Decode a PNG/JPEG into an ``(H, W, 3)`` float image in [0, 1]."""
    with Image.open(path) as im:
        im.load()
        if im.mode in ("I;16", "I;16B", "I;16L", "I"):
            arr = np.asarray(im).astype(np.uint16) if im.mode == "I" else np.asarray(im)
            arr = to_unit_range(arr.astype(np.uint16))
            return np.repeat(arr[..., None], 3, axis=2)
        arr = np.asarray(im.convert("RGB"))
    return to_unit_range(arr)


def to_uint8(img):
    return np.round(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)


def write_png(path, img):
    arr = img if np.asarray(img).dtype == np.uint8 else to_uint8(img)
    Image.fromarray(arr).save(path, format="PNG")


def write_pfm(path, data):
    """Write a little-endian PFM (``Pf`` for one channel, ``PF`` for three)."""
    data = np.asarray(data, dtype="<f4")
    if data.ndim == 2:
        tag = b"Pf"
    elif data.ndim == 3 and data.shape[2] == 3:
        tag = b"PF"
    else:
        raise ValueError(f"PFM holds 1 or 3 channels, got shape {data.shape}")
    h, w = data.shape[:2]
    with open(path, "wb") as fh:
        fh.write(tag + b"\n" + f"{w} {h}\n".encode() + b"-1.0\n")
        # PFM rows run bottom to top
        fh.write(np.ascontiguousarray(data[::-1]).tobytes())


def read_pfm(path):
    with open(path, "rb") as fh:
        tag = fh.readline().strip()
        if tag not in (b"Pf", b"PF"):
            raise ValueError(f"{path}: not a PFM file")
        w, h = map(int, fh.readline().split())
        scale = float(fh.readline())
        dtype = "<f4" if scale < 0 else ">f4"
        channels = 3 if tag == b"PF" else 1
        data = np.frombuffer(fh.read(), dtype=dtype, count=w * h * channels)
    shape = (h, w, 3) if channels == 3 else (h, w)
    return data.reshape(shape)[::-1].astype(np.float32)


def write_rows(path_or_file, header, rows):
    """RFC-4180 CSV with CRLF line endings."""
    if hasattr(path_or_file, "write"):
        writer = csv.writer(path_or_file, lineterminator="\r\n")
        writer.writerow(header)
        writer.writerows(rows)
        return
    with open(path_or_file, "w", newline="", encoding="utf-8") as fh:
        write_rows(fh, header, rows)
