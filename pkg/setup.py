from setuptools import setup, find_packages

setup(
    name="bott_towers",
    version="0.1.0",
    description="Exact invariants of real Bott towers: Z2 cohomology, Stiefel-Whitney classes, fundamental group and H1",
    packages=find_packages(exclude=['examples', 'examples.*']),
    package_data={'bott_towers': ['goldens/*.json']},
    install_requires=[
        'numpy>=1.21.0',
        'pandas>=1.3.0',
        'python-dotenv>=0.19.0',
        'tqdm>=4.62.0',
    ],
    extras_require={
        'test': [
            'pytest>=7.0.0',
            'pytest-cov>=3.0.0',
        ],
    },
    entry_points={
        'console_scripts': [
            'bott-towers=bott_towers.cli:main',
        ],
    },
    python_requires='>=3.8',
)
