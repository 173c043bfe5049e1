from setuptools import setup, find_packages

setup(
    name="cellsense",
    version="0.1",
    packages=find_packages(exclude=["tests", "tests.*"]),
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
    ],
    extras_require={"test": ["pytest>=7"]},
    entry_points={"console_scripts": ["cellsense=CellSense.runner.cli:main"]},
    description="Blind per-cell transmit power detection in multi-cell OFDM by free deconvolution.",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    python_requires=">=3.10",
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
    ],
)
