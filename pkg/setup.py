from setuptools import setup, find_packages
from pathlib import Path

# Read README
readme_file = Path(__file__).parent / "README.md"
long_description = readme_file.read_text(encoding="utf-8") if readme_file.exists() else ""

setup(
    name="geocube",
    version="0.1.0",
    author="Galkurta",
    description="Cubical homology, cup and cap products, Poincare duality and co-orientation sign checks",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    py_modules=["main", "config"],
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
    python_requires=">=3.11",
    install_requires=[
        "numpy>=1.24.0",
        "networkx>=3.2",
        "galois>=0.3.8",
        "PySide6>=6.6.0",
    ],
    extras_require={
        "dev": [
            "pytest>=7.4.0",
            "hypothesis>=6.90.0",
            "sympy>=1.12",
            "black>=23.7.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "geocube=main:main",
        ],
    },
    include_package_data=True,
    package_data={
        "resources": ["*.json"],
    },
)
